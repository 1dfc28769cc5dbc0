#pragma once

// Register machines for the response-time, counting and doubling properties.

#include <cstddef>

#include "qmon/machine.hpp"

namespace qmon {

/// Exact monitor for the maximal response time: registers x (current
/// response time while below the record) and y (the record).
RegisterMachine build_Mmax();
/// Exact monitor for the average response time: registers t (total of all
/// observations while some request was pending) and c (number of requests).
RegisterMachine build_Mavg();

/// Number of states used by the register-free mrt monitor saturating at `cap`.
std::size_t saturating_mrt_states(std::size_t cap);
/// Register-free monitor reporting min(mrt, cap) (inf after a double request).
RegisterMachine build_saturating_mrt(std::size_t cap);
/// The most precise saturating mrt monitor with at most `states` states; a
/// constant-0 monitor when fewer than three states are available.
RegisterMachine build_finite_state_mrt(std::size_t states);

/// Approximation schemes for k independent request/ack pairs.
enum class KPairScheme {
  /// One M_max per pair: 2k counters, exact.
  Exact,
  /// One record per pair and one shared running counter that follows the
  /// lowest-indexed pending pair: k+1 counters.
  Priority,
  /// One record per group of two pairs, owned by the pair that last raised
  /// it, and one shared running counter: ceil(k/2)+1 counters.
  PairedMax,
  /// A common lower bound w witnessed round-robin by every pair, and one
  /// running counter: 2 counters.
  SharedWitness,
};

std::string to_string(KPairScheme s);
std::size_t kpair_counters(KPairScheme s, std::size_t k);
/// The most precise scheme fitting in `counters` registers; throws Error when
/// fewer than two are available.
KPairScheme kpair_scheme_for(std::size_t k, std::size_t counters);

/// Exact componentwise mrt monitor over the k-pair alphabet.
RegisterMachine build_kpair_monitor(std::size_t k);
RegisterMachine build_kpair_approx(std::size_t k, KPairScheme scheme);

/// Exact monitor of p_k with k counter-with-decrement registers.
RegisterMachine build_pk_monitor(std::size_t k);
/// Under-approximation of p_k with l < k registers: symbols above l count as
/// an immediate violation.
RegisterMachine build_pk_approx(std::size_t k, std::size_t l);

/// Under-approximation with k registers of the binary-block property:
/// tracks n_1..n_k and treats any larger block value as a violation.
RegisterMachine build_binary_pk(std::size_t k);

/// Exact adder monitor of 2^(longest block of a's).
RegisterMachine build_doubling_adder();
/// Counter-based monitor reporting 2 * (longest block of a's).
RegisterMachine build_doubling_counter();

}  // namespace qmon
