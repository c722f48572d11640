#include "gugt/preprocess.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "gugt/error.hpp"

namespace gugt {

void FilterParams::validate() const {
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorCode::InvalidConfig, "median window must be odd and >= 1, got " + std::to_string(window));
  }
}

std::vector<double> median_filter(std::span<const double> values, std::span<const bool> valid, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw Error(ErrorCode::InvalidConfig, "median window must be odd");
  const auto n = values.size();
  const auto half = window / 2;
  std::vector<double> out(values.begin(), values.end());
  std::vector<double> buf;
  buf.reserve(window);
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    const auto reach = std::min({half, i, n - 1 - i});
    buf.clear();
    for (auto k = i - reach; k <= i + reach; ++k) {
      if (valid[k]) buf.push_back(values[k]);
    }
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    out[i] = *mid;
  }
  return out;
}

std::vector<double> median_filter(std::span<const double> values, std::size_t window) {
  // std::vector<bool> is not contiguous, so the flags live in a plain array.
  auto flags = std::make_unique<bool[]>(values.size());
  std::fill_n(flags.get(), values.size(), true);
  return median_filter(values, std::span<const bool>(flags.get(), values.size()), window);
}

namespace {

void require_frames(const Session& s) {
  if (s.frames.empty()) throw Error(ErrorCode::EmptySession, s.subject_id + "/" + s.trial_id + " has no frames");
}

double& coord(Vec3& p, int axis) { return axis == 0 ? p.x : (axis == 1 ? p.y : p.z); }

}  // namespace

Session median_filter_session(const Session& session, const FilterParams& params) {
  require_frames(session);
  params.validate();
  Session out = session;
  if (params.window == 1) return out;
  const auto n = session.frames.size();
  std::vector<double> series(n);
  auto valid = std::make_unique<bool[]>(n);
  for (std::size_t j = 0; j < kJointCount; ++j) {
    for (std::size_t f = 0; f < n; ++f) valid[f] = session.frames[f].tracked[j];
    for (int axis = 0; axis < 3; ++axis) {
      for (std::size_t f = 0; f < n; ++f) series[f] = coord(out.frames[f].positions[j], axis);
      const auto filtered = median_filter(series, std::span<const bool>(valid.get(), n), params.window);
      for (std::size_t f = 0; f < n; ++f) coord(out.frames[f].positions[j], axis) = filtered[f];
    }
  }
  return out;
}

Session fill_gaps(const Session& session, const FilterParams& params) {
  Session out = session;
  const auto n = session.frames.size();
  for (std::size_t j = 0; j < kJointCount; ++j) {
    std::size_t f = 0;
    while (f < n) {
      if (session.frames[f].tracked[j]) {
        ++f;
        continue;
      }
      auto end = f;
      while (end < n && !session.frames[end].tracked[j]) ++end;
      const auto run = end - f;
      if (f > 0 && end < n && run <= params.max_gap_frames) {
        const auto& a = session.frames[f - 1];
        const auto& b = session.frames[end];
        const auto span_ms = static_cast<double>(b.t_ms - a.t_ms);
        for (auto k = f; k < end; ++k) {
          const double w = static_cast<double>(session.frames[k].t_ms - a.t_ms) / span_ms;
          out.frames[k].positions[j] = a.positions[j] + (b.positions[j] - a.positions[j]) * w;
          out.frames[k].tracked[j] = true;
        }
      }
      f = end;
    }
  }
  return out;
}

Session preprocess_session(const Session& session, const FilterParams& params) {
  return median_filter_session(fill_gaps(session, params), params);
}

}  // namespace gugt
