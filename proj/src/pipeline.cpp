#include "gugt/pipeline.hpp"

namespace gugt {

SessionAnalysis analyze_session(const Session& session, const PipelineParams& params) {
  params.validate();
  SessionAnalysis a;
  a.cleaned = preprocess_session(session, params.filter);
  a.segmentation = segment_phases(a.cleaned, params.segmentation);
  a.hip_depth = hip_depth_signal(a.cleaned);
  a.elbow_xdistance = elbow_xdistance_signal(a.cleaned);
  a.heel_difference = heel_depth_difference(a.cleaned);
  a.steps = detect_steps(a.heel_difference, a.segmentation.walking, params.segmentation);
  a.gait = gait_features(a.segmentation, a.steps, a.cleaned);
  a.anatomy = anatomical_features(a.cleaned);
  return a;
}

}  // namespace gugt
