#pragma once

#include <optional>
#include <vector>

#include "gugt/error.hpp"
#include "gugt/features.hpp"
#include "gugt/preprocess.hpp"
#include "gugt/segmentation.hpp"
#include "gugt/skeleton.hpp"

namespace gugt {

struct PipelineParams {
  FilterParams filter;
  SegmentationParams segmentation;

  void validate() const {
    filter.validate();
    segmentation.validate();
  }
};

/// Everything extracted from one session: cleaned frames, phases, steps,
/// the trial-level gait numbers and the per-frame anatomical stream.
struct SessionAnalysis {
  Session cleaned;
  PhaseSegmentation segmentation;
  TimeSeries hip_depth;
  TimeSeries elbow_xdistance;
  TimeSeries heel_difference;
  StepEvents steps;
  GaitFeatures gait;
  std::vector<AnatomicalFrameFeatures> anatomy;
};

/// Gap fill, median filter, segmentation and feature extraction.
/// Any stage error propagates as gugt::Error.
SessionAnalysis analyze_session(const Session& session, const PipelineParams& params);

}  // namespace gugt
