#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "hgbs/mps.hpp"

namespace hgbs {

namespace instr {

struct Squeeze {
  int slot;
  double r;
  int logical_mode;
};

struct BeamSplit {
  int slot_a;
  int slot_b;
  double theta;
  double phi;
  int gate_index;  // position of this gate in the static circuit
  int logical_a;
  int logical_b;
};

struct Measure {
  int slot;
  int logical_mode;
};

struct Reset {
  int slot;
};

}  // namespace instr

using Instruction = std::variant<instr::Squeeze, instr::BeamSplit, instr::Measure, instr::Reset>;

/// Measure-and-repurpose program running an M-mode MPS circuit on a few
/// physical slots.
struct HolographicSchedule {
  int slot_count = 0;
  int logical_mode_count = 0;
  std::vector<Instruction> instructions;
};

/// Greedy earliest-measure compilation. A logical mode is bound to a free
/// slot (reset first if the slot was used) and squeezed right before its
/// first gate; it is measured as soon as its last gate has run. Among ready
/// gates, those acting only on live modes go first, then lowest static index.
HolographicSchedule compile_schedule(const MpsCircuit& circuit, const RVector& theta,
                                     const RVector& phi);

/// Maximum number of simultaneously bound slots.
int peak_slots(const HolographicSchedule& schedule);

/// Static gate indices in schedule order.
std::vector<int> replay_gates(const HolographicSchedule& schedule);

/// Throws NumericalError if a mode is touched after measurement, squeezed or
/// measured other than exactly once, or a slot is rebound without Reset.
void check_schedule(const HolographicSchedule& schedule);

void print_schedule(std::ostream& out, const HolographicSchedule& schedule);
nlohmann::json schedule_to_json(const HolographicSchedule& schedule);

}  // namespace hgbs
