#ifndef ECHOCALC_H
#define ECHOCALC_H

/* echocalc: computing with the checksum machinery of ICMP Echo.
 *
 * The library simulates a pool of echo-answering devices behind an unreliable
 * transport and uses their Internet-checksum processing as the arithmetic unit
 * of two workloads: Hopfield associative recall (a reply's checksum field is
 * the neuron's weighted input sum) and Conway's Life (a device's silent
 * checksum accept/drop decision evaluates the cell transition predicate).
 *
 * Plain C surface: opaque handles, integer status codes, caller-owned buffers.
 * Every function returning ec_status leaves outputs untouched on failure;
 * ec_last_error() describes the most recent failure on the calling thread.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ECHOCALC_VERSION_MAJOR 1
#define ECHOCALC_VERSION_MINOR 0

typedef enum ec_status {
  EC_OK = 0,
  EC_ERR_INVALID_ARGUMENT = 1,
  EC_ERR_DECODE = 2,               /* bytes do not parse as an echo message */
  EC_ERR_UNKNOWN_ADDRESS = 3,
  EC_ERR_INSUFFICIENT_DEVICES = 4, /* pool cannot cover the grid */
  EC_ERR_IO = 5,                   /* file or socket trouble */
  EC_ERR_PROTOCOL = 6,             /* e.g. persistent contradictory replies */
  EC_ERR_BUFFER_TOO_SMALL = 7,
  EC_ERR_INTERNAL = 8
} ec_status;

const char* ec_status_str(ec_status s);
const char* ec_last_error(void); /* thread-local detail for the last failure */
void ec_version(int* major, int* minor);

/* ---------------------------------------------------------------- codec --- */

/* Checksum field value for an encoded echo message (big-endian bytes, field
 * bytes treated as zero while folding). len must be even and >= 8. */
ec_status ec_echo_checksum(const uint8_t* bytes, size_t len, uint16_t* out);

/* 1 iff bytes decode as an echo message whose full one's-complement fold,
 * checksum included, is 0xFFFF. Malformed input is simply 0. */
int ec_echo_valid(const uint8_t* bytes, size_t len);

/* Builds a checksummed echo request. data_words may be NULL when
 * data_count == 0. Needs 8 + 2*data_count bytes of capacity. */
ec_status ec_echo_build_request(uint16_t identifier, uint16_t sequence,
                                const uint16_t* data_words, size_t data_count,
                                uint8_t* out, size_t capacity, size_t* out_len);

/* Device-side handling: returns the reply bytes, or *out_len = 0 when the
 * device stays silent (undecodable input, non-request, or a checksum failure
 * with validating != 0). */
ec_status ec_echo_respond(const uint8_t* bytes, size_t len, int validating,
                          uint8_t* out, size_t capacity, size_t* out_len);

/* ------------------------------------------------------ simulated network --- */

typedef struct ec_net ec_net; /* opaque */

typedef struct ec_net_config {
  double drop_probability;       /* per leg, each direction */
  double duplicate_probability;  /* request leg only */
  double corruption_probability; /* per transmitted copy, one random bit flip */
  uint32_t reorder_window;       /* max delivery displacement, 0 = in order */
  double latency_median_ms;      /* round-trip median (lognormal) */
  double latency_shape;
  uint64_t rng_seed;
} ec_net_config;

void ec_net_config_default(ec_net_config* cfg);

ec_status ec_net_create(const ec_net_config* cfg, ec_net** out);
void ec_net_destroy(ec_net* net);

/* latency_median_ms < 0 inherits the network default latency model. */
ec_status ec_net_add_device(ec_net* net, uint64_t address, int validating,
                            double latency_median_ms, double latency_shape);
ec_status ec_net_send(ec_net* net, uint64_t address, const uint8_t* bytes, size_t len);
ec_status ec_net_advance(ec_net* net, double delta_ms);
double ec_net_now_ms(const ec_net* net);

/* Replies are polled in two phases: collect everything due, then read the
 * batch by index. Views stay valid until the next collect or destroy. */
typedef struct ec_reply_view {
  uint64_t address;
  double due_ms;
  const uint8_t* bytes;
  size_t len;
} ec_reply_view;

ec_status ec_net_collect_replies(ec_net* net, double now_ms, size_t* count);
ec_status ec_net_reply_at(const ec_net* net, size_t index, ec_reply_view* out);

/* ------------------------------------------------------------ experiments --- */

typedef struct ec_run_metrics {
  uint64_t messages_sent;
  uint64_t replies_received;
  uint64_t retries;
  uint64_t neuron_updates; /* applied neuron (or cell) updates */
  uint64_t coupling_updates;
  double elapsed_sim_ms;
  double elapsed_wall_ms;
  double cups_sim;  /* coupling updates per simulated second */
  double cups_wall; /* coupling updates per wall second */
  double msgs_per_s_sim;
  double msgs_per_s_wall;
} ec_run_metrics;

typedef struct ec_neuro_params {
  uint32_t neurons;
  uint32_t patterns;
  int32_t coupling_limit;
  uint32_t sets;
  uint32_t probes;
  uint32_t steps;
  double initial_distance;
  uint64_t seed;
  ec_net_config net;
  const char* csv_path; /* per-step mean distances; NULL = no file */
} ec_neuro_params;

void ec_neuro_params_default(ec_neuro_params* p);
ec_status ec_neuro_run(const ec_neuro_params* p, ec_run_metrics* metrics,
                       double* final_mean_distance_async);

typedef struct ec_life_params {
  uint32_t width;
  uint32_t height;
  uint64_t generations;
  int glider;        /* nonzero: 4x4 glider preset, devices wired directly */
  double fill;       /* random start density when glider == 0 */
  uint64_t devices;  /* pool size for non-glider runs; 0 = one per cell */
  uint32_t attempts; /* probe rounds per generation, 1 = no retry */
  uint64_t seed;
  ec_net_config net;
  double pool_median_lo_ms; /* pool generation range for non-glider runs */
  double pool_median_hi_ms;
  double pool_shape;
  const char* csv_path; /* per-generation counters; NULL = no file */
} ec_life_params;

typedef struct ec_life_report {
  uint64_t generations_completed;
  int64_t first_deviation_generation; /* -1 = stayed equal to the oracle */
  uint64_t deviating_cells;
  uint64_t measurement_messages;
  ec_run_metrics metrics;
} ec_life_report;

void ec_life_params_default(ec_life_params* p);
ec_status ec_life_run(const ec_life_params* p, ec_life_report* report);

typedef struct ec_probe_params {
  const char* devices_path; /* CSV pool description; NULL = generate */
  uint64_t generate_count;
  double generate_median_lo_ms;
  double generate_median_hi_ms;
  double generate_shape;
  uint32_t probes_per_device;
  uint64_t seed;
  ec_net_config net;
  const char* histogram_csv_path; /* NULL = no file */
  uint32_t histogram_bins;
  const char* devices_out_path; /* write the (generated) pool; NULL = skip */
} ec_probe_params;

typedef struct ec_probe_report {
  uint64_t devices_total;
  uint64_t devices_usable; /* measured at least one reply */
  uint64_t devices_kept;   /* usable and mean <= 10 s */
  double slowest_kept_ms;
  double fastest_kept_ms;
} ec_probe_report;

void ec_probe_params_default(ec_probe_params* p);
ec_status ec_probe_run(const ec_probe_params* p, ec_probe_report* report);

typedef struct ec_bench_params {
  int daemon_mode; /* 0 = simulated transport, 1 = loopback UDP daemon */
  uint32_t neurons;
  uint32_t patterns;
  int32_t coupling_limit;
  uint32_t steps;
  uint64_t seed;
  uint32_t pause_us;
} ec_bench_params;

void ec_bench_params_default(ec_bench_params* p);
ec_status ec_bench_run(const ec_bench_params* p, ec_run_metrics* metrics);

/* ----------------------------------------------------------------- daemon --- */

typedef struct ec_daemon ec_daemon; /* opaque */

/* devices_path (optional) assigns behaviors per address from a device file;
 * unlisted addresses fall back to the mix rule address % (v+nv) < v. port 0
 * binds an ephemeral port; read it back with ec_daemon_port. */
ec_status ec_daemon_start(uint16_t port, const char* devices_path,
                          uint32_t mix_validating, uint32_t mix_nonvalidating,
                          ec_daemon** out);
uint16_t ec_daemon_port(const ec_daemon* d);
uint64_t ec_daemon_datagrams_received(const ec_daemon* d);
uint64_t ec_daemon_replies_sent(const ec_daemon* d);
ec_status ec_daemon_stop(ec_daemon* d); /* stops, joins and frees */

#ifdef __cplusplus
}
#endif

#endif /* ECHOCALC_H */
