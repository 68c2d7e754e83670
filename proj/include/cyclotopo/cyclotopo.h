#ifndef CYCLOTOPO_H
#define CYCLOTOPO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CT_API __declspec(dllexport)
#else
#define CT_API __attribute__((visibility("default")))
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_ERR_INPUT = 2,
  CT_ERR_NUMERICAL = 3,
  CT_ERR_STRUCTURE = 4,
  CT_ERR_INTERNAL = 5
} ct_status;

typedef struct ct_network ct_network;
typedef struct ct_dataset ct_dataset;
typedef struct ct_result ct_result;

CT_API const char* ct_version(void);
/* Message of the last failed call on this thread. */
CT_API const char* ct_last_error(void);
/* Frees strings returned through char** out parameters. */
CT_API void ct_string_free(char* s);

/* Network specifications (JSON). */
CT_API ct_status ct_network_load(const char* path, ct_network** out);
CT_API ct_status ct_network_parse(const char* json, ct_network** out);
CT_API void ct_network_free(ct_network* net);
CT_API ct_status ct_network_to_json(const ct_network* net, char** out);
/* Undirected topology with hidden labels, as a graph document. */
CT_API ct_status ct_network_truth_json(const ct_network* net, char** out);
CT_API ct_status ct_network_assumptions_json(const ct_network* net, char** out);

/* Datasets: one complex series per node. */
CT_API ct_status ct_simulate(const ct_network* net, uint64_t samples, uint64_t burn_in, uint64_t seed, int full_output,
                             ct_dataset** out);
CT_API ct_status ct_dataset_load(const char* path, ct_dataset** out);
/* `.bin` selects the packed binary format; comment may be NULL. */
CT_API ct_status ct_dataset_save(const ct_dataset* ds, const char* path, const char* comment);
/* re and im hold node_count * sample_count values, node-major. */
CT_API ct_status ct_dataset_create(size_t node_count, size_t sample_count, const int* ids, const double* re,
                                   const double* im, ct_dataset** out);
CT_API size_t ct_dataset_node_count(const ct_dataset* ds);
CT_API size_t ct_dataset_sample_count(const ct_dataset* ds);
CT_API int ct_dataset_node_id(const ct_dataset* ds, size_t index);
CT_API ct_status ct_dataset_copy_node(const ct_dataset* ds, size_t index, double* re, double* im);
CT_API ct_status ct_dataset_drop_nodes(ct_dataset* ds, const int* ids, size_t count);
CT_API void ct_dataset_free(ct_dataset* ds);
CT_API ct_status ct_detect_period(const ct_dataset* ds, size_t index, int max_period, double threshold, int* out);

/* Learners. config_json may be NULL; keys as in ct_config_resolve. */
CT_API ct_status ct_learn(const ct_dataset* ds, const char* config_json, ct_result** out);
CT_API ct_status ct_learn_latent(const ct_dataset* ds, const char* config_json, ct_result** out);
CT_API ct_status ct_learn_oracle(const ct_network* net, const char* config_json, ct_result** out);
CT_API ct_status ct_learn_latent_oracle(const ct_network* net, const char* config_json, ct_result** out);
CT_API ct_status ct_result_json(const ct_result* r, char** out);
CT_API ct_status ct_result_diagnostics_csv(const ct_result* r, char** out);
CT_API ct_status ct_result_spectral_csv(const ct_result* r, char** out);
/* stage: "moral", "topology" (full) or "gc", "observed_topology", "final" (latent). */
CT_API ct_status ct_result_dot(const ct_result* r, const char* stage, char** out);
CT_API void ct_result_free(ct_result* r);

/* Effective configuration after applying config_json to the defaults
   (oracle defaults when oracle is nonzero). */
CT_API ct_status ct_config_resolve(const char* config_json, int oracle, char** out);

/* Metrics of a graph document (or a result document) against the truth. */
CT_API ct_status ct_eval(const char* graph_json, const ct_network* truth, char** out);

/* Exact inverse PSD dump; latent nonzero restricts to observed nodes. */
CT_API ct_status ct_oracle_dump(const ct_network* net, const char* config_json, int latent, char** out);

#ifdef __cplusplus
}
#endif

#endif
