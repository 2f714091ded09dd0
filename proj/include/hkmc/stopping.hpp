#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hkmc/process.hpp"

namespace hkmc {

// All times here are grid indices into Path::states; kNever stands for
// +infinity (never within the horizon, i.e. censored).

/// First grid time with the state outside B (cemetery included); with the
/// model's bridge correction on, a step whose bridge crosses the boundary of
/// B also counts.
std::uint64_t exit_time(const Path& path, const Region& B);

/// tau_{B, sigma}: first grid time >= sigma at which the path is outside B.
/// Crossing corrections only apply to steps that end after sigma.
std::uint64_t exit_time_after(const Path& path, const Region& B, std::uint64_t sigma);

/// First grid time with the state in B.
std::uint64_t entrance_time(const Path& path, const Region& B);

/// First grid time >= sigma with the state in B; kNever if sigma is kNever.
std::uint64_t entrance_time_after(const Path& path, const Region& B, std::uint64_t sigma);

struct MdhSequence {
  /// (tau_n, sigma_n) for n = 1, 2, ...; sigma_n may be kNever, and the
  /// last recorded pair ends the sequence.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  /// Number of indices n with sigma_n <= horizon.
  std::size_t truncation = 0;
};

/// tau_1 = tau_U, sigma_n = entrance of B after tau_n, tau_{n+1} = exit of U
/// after sigma_n, stopped at the first time beyond `horizon` (grid index).
/// Requires closure(B) inside U.
MdhSequence mdh_sequence(const Path& path, const Region& U, const Region& B, std::uint64_t horizon);

struct StoppingRow {
  std::uint64_t path_index;
  std::string name;
  std::uint64_t time;  // kNever prints as INF
};

void write_stopping_csv(std::ostream& os, const std::vector<StoppingRow>& rows);

}  // namespace hkmc
