#pragma once

// Concrete SMP protocols (k-party equality with XOR-shared randomness,
// shared-index Gap-Parity, private-coin equality baselines) and the
// reductions between protocol specs.

#include "smplab/core.hpp"
#include "smplab/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace smplab {

// --- Gap-Parity ------------------------------------------------------------

/// Weight w of the promise: true iff w lies outside the closed interval [n/3, 2n/3].
bool gap_parity_promise(std::size_t weight, std::size_t n);

/// 0 if |x_1 ^ ... ^ x_k| < n/2, 1 otherwise; nullopt when the promise fails.
std::optional<bool> gp_value(const InputTuple& input);

/// Each player sends x_i(j) for the shared index j; the referee XORs the bits.
bool gap_parity_protocol(const InputTuple& input, std::size_t shared_index);

/// Shared-index protocol: unrestricted shared randomness holds one index
/// uniform over [0, n); cost k.
ProtocolSpec gap_parity_spec(int k, std::size_t n);

/// Extension: `samples` independent shared indices, majority vote over the
/// per-index parities; cost samples * k. `samples` must be odd.
ProtocolSpec boosted_gap_parity_spec(int k, std::size_t n, std::size_t samples);

// --- k-party equality --------------------------------------------------------

bool all_equal(const InputTuple& input);

/// Message bit j is the GF(2) inner product of r_i^(j) with the fragment.
BitString equality_xor_player(const BitString& fragment, std::span<const BitString> instances);

/// 1 iff m_1(j) ^ ... ^ m_k(j) == 0 for every instance j.
bool equality_xor_referee(std::span<const BitString> messages);

/// k-party equality with XOR-shared randomness, c bits per player. For c > 1
/// this is `parallel_repeat` of the single-bit protocol, so player i's
/// string holds its c instance strings back to back.
ProtocolSpec equality_xor_spec(int k, std::size_t n, int c);

/// r_1.(x_1 ^ x_k) ^ ... ^ r_{k-1}.(x_{k-1} ^ x_k) for one instance.
bool equality_xor_parity_identity(const InputTuple& input, const XorTuple& r);

/// Exact rejection probability of `equality_xor_spec(k, n, c)` on `input`, by
/// enumeration. nullopt for equal inputs (acceptance is certain there).
std::optional<Rational> equality_xor_error(int k, std::size_t n, int c, const InputTuple& input);

/// Private coins only: everyone sends the whole fragment. Cost k*n.
ProtocolSpec send_all_equality_spec(int k, std::size_t n);

/// Private coins only: each player reports `samples` (index, bit) pairs at
/// private uniformly random indices; the referee rejects iff two reports name
/// the same index with different bits.
ProtocolSpec sampled_equality_spec(int k, std::size_t n, int samples);

// --- Reductions --------------------------------------------------------------

/// `count` independent copies of `base` run side by side; the referee
/// accepts iff every copy accepts. Messages of `base` must have exactly their
/// declared length.
ProtocolSpec parallel_repeat(const ProtocolSpec& base, int count);

/// Two-player simulation of a private-coin k-player protocol: the first
/// player runs A_1, the second runs A_2..A_k on the concatenated fragments.
/// The first fragment is zero-padded to (k-1)n bits; see `collapse_input`.
ProtocolSpec collapse_players(const ProtocolSpec& spec);
InputTuple collapse_input(const InputTuple& input);

/// Replaces the protocol's randomness by a uniformly chosen row of a table of
/// m assignments sampled with `seed`; the row index is unrestricted shared
/// randomness of ceil(log2 m) bits.
ProtocolSpec newman_sample(const ProtocolSpec& spec, std::size_t m, std::uint64_t seed);

/// Runs an XOR-shared protocol on 2-shared randomness via the cyclic-pair
/// construction. Players derive r_i locally.
ProtocolSpec via_xor_emulation(const ProtocolSpec& xor_spec);

/// Runs a t'-shared protocol on t-shared randomness (t > t') via slicing.
ProtocolSpec via_lower_emulation(const ProtocolSpec& spec, int t);

}  // namespace smplab
