#include "hgbs/holo.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

namespace hgbs {

HolographicSchedule compile_schedule(const MpsCircuit& circuit, const RVector& theta,
                                     const RVector& phi) {
  const auto gates = circuit.bind(theta, phi);
  const int m = circuit.mode_count;
  const int k_gates = static_cast<int>(gates.size());

  // Each gate waits for the previous static gate on either of its modes.
  std::vector<std::vector<int>> deps(k_gates);
  std::vector<int> last_on_mode(m, -1);
  std::vector<int> remaining(m, 0);
  for (int k = 0; k < k_gates; ++k) {
    for (int mode : {gates[k].mode_a, gates[k].mode_b}) {
      if (last_on_mode[mode] >= 0) deps[k].push_back(last_on_mode[mode]);
      last_on_mode[mode] = k;
      ++remaining[mode];
    }
  }

  HolographicSchedule sched;
  sched.logical_mode_count = m;
  std::vector<int> slot_of(m, -1);  // live logical mode → slot
  std::vector<bool> measured(m, false);
  std::vector<int> slot_dirty;      // 1 if the slot held a measured mode
  std::vector<bool> slot_free;
  std::vector<bool> done(k_gates, false);

  auto measure = [&](int mode) {
    const int s = slot_of[mode];
    sched.instructions.push_back(instr::Measure{s, mode});
    measured[mode] = true;
    slot_of[mode] = -1;
    slot_free[s] = true;
    slot_dirty[s] = 1;
  };
  auto bind = [&](int mode) {
    int s = -1;
    for (int i = 0; i < static_cast<int>(slot_free.size()); ++i)
      if (slot_free[i]) {
        s = i;
        break;
      }
    if (s < 0) {
      s = static_cast<int>(slot_free.size());
      slot_free.push_back(true);
      slot_dirty.push_back(0);
    }
    if (slot_dirty[s]) sched.instructions.push_back(instr::Reset{s});
    slot_free[s] = false;
    slot_dirty[s] = 0;
    slot_of[mode] = s;
    sched.instructions.push_back(instr::Squeeze{s, circuit.squeeze(mode), mode});
  };
  auto live = [&](int mode) { return slot_of[mode] >= 0; };

  for (int executed = 0; executed < k_gates; ++executed) {
    for (int mode = 0; mode < m; ++mode)
      if (live(mode) && remaining[mode] == 0) measure(mode);

    int pick = -1;
    int fallback = -1;
    for (int k = 0; k < k_gates; ++k) {
      if (done[k]) continue;
      bool ready = true;
      for (int d : deps[k]) ready = ready && done[d];
      if (!ready) continue;
      if (live(gates[k].mode_a) && live(gates[k].mode_b)) {
        pick = k;
        break;
      }
      if (fallback < 0) fallback = k;
    }
    if (pick < 0) pick = fallback;
    const auto& g = gates[pick];
    for (int mode : {g.mode_a, g.mode_b})
      if (!live(mode)) bind(mode);
    sched.instructions.push_back(instr::BeamSplit{slot_of[g.mode_a], slot_of[g.mode_b], g.theta,
                                                  g.phi, pick, g.mode_a, g.mode_b});
    done[pick] = true;
    --remaining[g.mode_a];
    --remaining[g.mode_b];
  }
  for (int mode = 0; mode < m; ++mode)
    if (live(mode)) measure(mode);
  // Modes without gates (none for chains with M ≥ 2) are still squeezed and read out.
  for (int mode = 0; mode < m; ++mode)
    if (!measured[mode]) {
      bind(mode);
      measure(mode);
    }
  sched.slot_count = static_cast<int>(slot_free.size());
  return sched;
}

int peak_slots(const HolographicSchedule& schedule) {
  std::vector<bool> bound(schedule.slot_count, false);
  int live = 0;
  int peak = 0;
  for (const auto& ins : schedule.instructions) {
    if (const auto* s = std::get_if<instr::Squeeze>(&ins)) {
      if (!bound[s->slot]) ++live;
      bound[s->slot] = true;
    } else if (const auto* ms = std::get_if<instr::Measure>(&ins)) {
      if (bound[ms->slot]) --live;
      bound[ms->slot] = false;
    }
    peak = std::max(peak, live);
  }
  return peak;
}

std::vector<int> replay_gates(const HolographicSchedule& schedule) {
  std::vector<int> out;
  for (const auto& ins : schedule.instructions)
    if (const auto* b = std::get_if<instr::BeamSplit>(&ins)) out.push_back(b->gate_index);
  return out;
}

void check_schedule(const HolographicSchedule& schedule) {
  const int m = schedule.logical_mode_count;
  std::vector<int> squeezed(m, 0);
  std::vector<int> measured(m, 0);
  std::vector<int> host(schedule.slot_count, -1);  // logical mode bound to slot
  std::vector<bool> needs_reset(schedule.slot_count, false);
  auto fail = [](const std::string& what) { throw NumericalError("invalid schedule: " + what); };
  for (const auto& ins : schedule.instructions) {
    if (const auto* s = std::get_if<instr::Squeeze>(&ins)) {
      if (needs_reset[s->slot]) fail("slot rebound without reset");
      if (host[s->slot] >= 0) fail("slot squeezed while hosting a live mode");
      if (squeezed[s->logical_mode]++) fail("mode squeezed twice");
      host[s->slot] = s->logical_mode;
    } else if (const auto* b = std::get_if<instr::BeamSplit>(&ins)) {
      if (host[b->slot_a] != b->logical_a || host[b->slot_b] != b->logical_b)
        fail("gate touches a slot not hosting its logical mode");
      if (measured[b->logical_a] || measured[b->logical_b]) fail("gate after measurement");
    } else if (const auto* ms = std::get_if<instr::Measure>(&ins)) {
      if (host[ms->slot] != ms->logical_mode) fail("measure on wrong slot");
      if (measured[ms->logical_mode]++) fail("mode measured twice");
      host[ms->slot] = -1;
      needs_reset[ms->slot] = true;
    } else if (const auto* r = std::get_if<instr::Reset>(&ins)) {
      needs_reset[r->slot] = false;
    }
  }
  for (int j = 0; j < m; ++j)
    if (squeezed[j] != 1 || measured[j] != 1) fail("mode not squeezed and measured exactly once");
}

void print_schedule(std::ostream& out, const HolographicSchedule& schedule) {
  out << std::setprecision(10);
  for (const auto& ins : schedule.instructions) {
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, instr::Squeeze>)
            out << "SQUEEZE slot=" << i.slot << " r=" << i.r << " mode=" << i.logical_mode + 1;
          else if constexpr (std::is_same_v<T, instr::BeamSplit>)
            out << "BS slots=" << i.slot_a << "," << i.slot_b << " theta=" << i.theta
                << " phi=" << i.phi << " modes=" << i.logical_a + 1 << "," << i.logical_b + 1;
          else if constexpr (std::is_same_v<T, instr::Measure>)
            out << "MEASURE slot=" << i.slot << " mode=" << i.logical_mode + 1;
          else
            out << "RESET slot=" << i.slot;
        },
        ins);
    out << "\n";
  }
}

nlohmann::json schedule_to_json(const HolographicSchedule& schedule) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& ins : schedule.instructions) {
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, instr::Squeeze>)
            list.push_back({{"op", "squeeze"}, {"slot", i.slot}, {"r", i.r},
                            {"logical_mode", i.logical_mode}});
          else if constexpr (std::is_same_v<T, instr::BeamSplit>)
            list.push_back({{"op", "beamsplit"}, {"slots", {i.slot_a, i.slot_b}},
                            {"theta", i.theta}, {"phi", i.phi}, {"gate_index", i.gate_index},
                            {"logical_modes", {i.logical_a, i.logical_b}}});
          else if constexpr (std::is_same_v<T, instr::Measure>)
            list.push_back({{"op", "measure"}, {"slot", i.slot}, {"logical_mode", i.logical_mode}});
          else
            list.push_back({{"op", "reset"}, {"slot", i.slot}});
        },
        ins);
  }
  return {{"slot_count", schedule.slot_count},
          {"logical_mode_count", schedule.logical_mode_count},
          {"instructions", list}};
}

}  // namespace hgbs
