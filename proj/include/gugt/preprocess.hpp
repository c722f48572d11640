#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gugt/skeleton.hpp"

namespace gugt {

struct FilterParams {
  std::size_t window = 5;          // odd, >= 1
  std::size_t max_gap_frames = 5;  // longest untracked run that gets interpolated

  void validate() const;
};

/// Median over a centered window that shrinks symmetrically at the ends, so
/// index i uses min(i, n-1-i, window/2) neighbours on each side. Samples
/// whose flag is false are left untouched and excluded from neighbouring
/// windows; with an even number of usable samples the lower median is taken.
std::vector<double> median_filter(std::span<const double> values, std::span<const bool> valid, std::size_t window);
std::vector<double> median_filter(std::span<const double> values, std::size_t window);

/// Per joint, per coordinate median filter. Timestamps and flags are kept.
Session median_filter_session(const Session& session, const FilterParams& params);

/// Linear (in time) interpolation over untracked runs of at most
/// max_gap_frames frames that are bracketed by tracked frames on both sides.
/// Filled samples become tracked; leading, trailing and longer runs stay as
/// they are.
Session fill_gaps(const Session& session, const FilterParams& params);

/// Gap repair followed by median filtering.
Session preprocess_session(const Session& session, const FilterParams& params);

}  // namespace gugt
