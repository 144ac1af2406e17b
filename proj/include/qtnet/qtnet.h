/* C interface to the qtnet library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return a qtnet_status; on failure the
 * message is available from qtnet_last_error() until the next call on the
 * same thread. Strings returned through `const char**` stay valid for the
 * lifetime of the handle they came from.
 */
#ifndef QTNET_H
#define QTNET_H

#include <stddef.h>

#if defined(QTNET_BUILDING_LIBRARY)
#define QTNET_API __attribute__((visibility("default")))
#else
#define QTNET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qtnet_status {
  QTNET_OK = 0,
  QTNET_ERR_CONFIG = 2,   /* malformed configuration or parameters */
  QTNET_ERR_PHYSICS = 3,  /* reconciliation or crosscheck failure */
  QTNET_ERR_IO = 4,
  QTNET_ERR_ARGUMENT = 5, /* null handle or bad argument */
  QTNET_ERR_INTERNAL = 6
} qtnet_status;

typedef struct qtnet_config qtnet_config;
typedef struct qtnet_model qtnet_model;
typedef struct qtnet_result qtnet_result;

QTNET_API const char* qtnet_version(void);
QTNET_API const char* qtnet_last_error(void);

/* Configuration */
QTNET_API qtnet_status qtnet_config_parse(const char* json_text, qtnet_config** out);
QTNET_API qtnet_status qtnet_config_set_command(qtnet_config* cfg, const char* command);
QTNET_API qtnet_status qtnet_config_set_format(qtnet_config* cfg, const char* format);
QTNET_API qtnet_status qtnet_config_set_output(qtnet_config* cfg, const char* path);
QTNET_API qtnet_status qtnet_config_set_points(qtnet_config* cfg, int points);
QTNET_API qtnet_status qtnet_config_set_range(qtnet_config* cfg, double lo, double hi);
/* Effective output path; "" means standard output. */
QTNET_API const char* qtnet_config_output_path(const qtnet_config* cfg);
/* Canonical JSON with every default spelled out. */
QTNET_API qtnet_status qtnet_config_canonical(qtnet_config* cfg, const char** json_text);
QTNET_API void qtnet_config_free(qtnet_config* cfg);

/* Run the configured command. With an output path the file is written
 * atomically (no partial file on failure); the text is available from the
 * result either way. */
QTNET_API qtnet_status qtnet_run(const qtnet_config* cfg, qtnet_result** out);
QTNET_API const char* qtnet_result_output(const qtnet_result* res);
QTNET_API const char* qtnet_result_summary(const qtnet_result* res);
QTNET_API void qtnet_result_free(qtnet_result* res);

/* Rate graph of the configured model at its omega_c. */
QTNET_API qtnet_status qtnet_model_build(const qtnet_config* cfg, qtnet_model** out);
QTNET_API int qtnet_model_vertex_count(const qtnet_model* m);
QTNET_API int qtnet_model_edge_count(const qtnet_model* m);
QTNET_API int qtnet_model_circuit_count(const qtnet_model* m);
/* Steady-state populations into `out` (length >= vertex count). */
QTNET_API qtnet_status qtnet_model_populations(const qtnet_model* m, double* out, size_t len);
/* Total heat currents for baths "c", "h", "w"; power for a work source. */
QTNET_API qtnet_status qtnet_model_heat(const qtnet_model* m, const char* bath, double* out);
QTNET_API qtnet_status qtnet_model_power(const qtnet_model* m, double* out);
QTNET_API void qtnet_model_free(qtnet_model* m);

#ifdef __cplusplus
}
#endif

#endif /* QTNET_H */
