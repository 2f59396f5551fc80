#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rim/rng.hpp"

namespace rim {

/// Frame and resource layout of the coordination protocol. One radar
/// frame of `frame_duration_s` is divided into slots of (K+1) chirp
/// periods: one chirp period of control traffic on the dedicated
/// communication band, then a CPI of K chirps. The radar spectrum is
/// partitioned into `num_bands()` sub-bands of `radar_band_hz`; the
/// communication channel of `comm_bandwidth_hz` lies outside of it.
struct FrameConfig {
  double frame_duration_s = 2e-3;
  double chirp_duration_s = 20e-6;
  int chirps_per_frame = 99;            // K, chirps of one radar CPI
  double carrier_hz = 79e9;
  double comm_bandwidth_hz = 50e6;      // Bc
  double total_radar_bandwidth_hz = 1e9;
  double radar_band_hz = 50e6;          // width of one radar sub-band
  double interest_bandwidth_hz = 15e6;  // Bs of each radar within its band
  double sync_error_bound_s = 1e-6;
  double packet_airtime_s = 4e-6;
  double radio_range_m = 400.0;
  int db_staleness_frames = 5;

  double modified_duty_cycle() const;   // u' = (K+1) T / Tf
  int num_slots() const;                // floor(1 / u')
  int num_bands() const;
  int capacity() const { return num_slots() * num_bands(); }
  double slot_duration_s() const { return (chirps_per_frame + 1) * chirp_duration_s; }
  double comm_window_s() const { return chirp_duration_s; }
  /// Radar start of a slot, after its leading communication chirp period.
  double slot_radar_start_s(int slot) const {
    return slot * slot_duration_s() + comm_window_s();
  }
  void validate() const;
};

/// One radar communication unit: position, facing, field of view, and its
/// current (slot, band) resource with the sync-perturbed radar start time
/// inside the frame.
struct RcuState {
  int rcu_id = 0;
  int vehicle_id = 0;
  int slot = 0;
  int band = 0;
  double start_time_s = 0.0;
  double pos_x_m = 0.0;
  double pos_y_m = 0.0;
  double heading_rad = 0.0;
  double fov_rad = 3.14159265358979323846 / 2.0;
  bool persistent_conflict = false;
};

struct ControlPacket {
  struct Allocation {
    int rcu_id = 0;
    int slot = 0;
    int band = 0;
    double start_time_s = 0.0;
  };
  int vehicle_id = 0;
  std::vector<Allocation> allocations;   // covers all the vehicle's RCUs
  int priority = 1;                      // group size known to the sender
  double timestamp_s = 0.0;
};

/// Per-node view of who holds which (slot, band); entries expire after a
/// configurable number of frames without being re-heard.
class AllocationDb {
 public:
  struct Entry {
    int slot = 0;
    int band = 0;
    double start_time_s = 0.0;
    int priority = 1;
    long heard_frame = 0;
  };

  void merge(const ControlPacket& packet, long frame);
  void expire(long frame, int staleness_frames);
  bool occupied(int slot, int band, int except_vehicle) const;
  /// Highest priority among foreign holders of (slot, band), if any.
  std::optional<std::pair<int, int>> strongest_holder(int slot, int band,
                                                      int except_vehicle) const;
  int known_vehicles() const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::pair<int, int>, Entry>& entries() const { return entries_; }

 private:
  std::map<std::pair<int, int>, Entry> entries_;   // (vehicle, rcu) -> entry
};

/// Draws mutually disjoint (slot, band) resources for the RCUs of one
/// vehicle (uniform among the free ones); cross-vehicle collisions remain
/// possible by construction.
std::vector<RcuState> init_vehicle(int vehicle_id, int num_rcus, const FrameConfig& cfg,
                                   Rng& rng);

/// Places each RCU's radar start at its slot's radar instant plus a
/// uniform draw in [-bound, +bound].
void apply_sync_error(std::vector<RcuState>& rcus, const FrameConfig& cfg, double bound_s,
                      Rng& rng);

/// True when each radar lies inside the other's field-of-view cone.
bool mutually_in_fov(const RcuState& a, const RcuState& b);

/// Empirical interference probability of one frame: the fraction of
/// (victim chirp, interferer) pairs that are simultaneously active in the
/// same band, mutually in view, and land in the victim's interest band
/// after dechirping; averaged over victims.
double measure_interference(const std::vector<RcuState>& rcus, const FrameConfig& cfg);

/// Priority order: larger group first, then lower vehicle id.
bool has_priority_over(int group_a, int vehicle_a, int group_b, int vehicle_b);

struct Reallocation {
  int rcu_id = 0;
  int slot = 0;
  int band = 0;
  bool persistent_conflict = false;
};

/// Merges a received packet into the receiver's database and, when one of
/// the receiver's own resources now conflicts with a higher-priority
/// holder, moves it to the lowest-index free (slot, band). Returns the
/// reallocations to apply at the next frame boundary.
std::vector<Reallocation> handle_packet(AllocationDb& db, int own_vehicle_id,
                                        const std::vector<RcuState>& own_rcus,
                                        const ControlPacket& packet, long frame,
                                        const FrameConfig& cfg);

struct SimConfig {
  FrameConfig frame;
  int num_vehicles = 8;
  int rcus_per_vehicle = 1;
  double road_extent_m = 200.0;
  double lane_spacing_m = 4.0;
  int num_lanes = 2;                 // lane 0 heads +x, lane 1 heads -x, ...
  double rcu_fov_rad = 3.14159265358979323846 / 2.0;
  int frames = 10;
  std::uint64_t master_seed = 1;
  bool with_trace = false;
  bool coordinated = true;           // false freezes the initial assignment
};

struct FrameSummary {
  long frame = 0;
  double f_emp = 0.0;
  int active_conflicts = 0;          // (slot, band) pairs shared across vehicles
};

struct RunResult {
  std::vector<FrameSummary> per_frame;
  std::vector<std::string> trace;
  bool reached_zero = false;         // f_emp hit 0 and stayed there
  int persistent_conflicts = 0;
};

/// Discrete-event run of the protocol (single priority-queue engine; ties
/// broken by node id then insertion order). The uncoordinated baseline is
/// the same run with `coordinated = false`: identical placement, initial
/// assignment and sync errors, but no control traffic.
RunResult run_protocol(const SimConfig& cfg);

struct Trajectories {
  std::vector<double> coordinated;
  std::vector<double> uncoordinated;
};

/// Convenience wrapper running both variants on identical seeds.
Trajectories run_coordination_study(const SimConfig& cfg);

}  // namespace rim
