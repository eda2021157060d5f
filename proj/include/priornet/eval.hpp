#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "priornet/measures.hpp"

namespace priornet {

/// One scored example for a ranking-based detection task. Scores ascend
/// with uncertainty; the positive class is "misclassified" or
/// "out-of-distribution" depending on the task.
struct ScoredExample {
  double score = 0.0;
  bool is_positive = false;
};

/// Area under the ROC curve: the Mann-Whitney statistic
/// P(score_pos > score_neg) + P(tie)/2, computed by rank sum with midranks
/// for ties. Throws std::invalid_argument unless both classes are present.
double auroc(std::span<const ScoredExample> examples);

/// Area under the precision-recall curve as average precision. Ties are
/// grouped: every positive in a tie group receives the precision measured
/// at the end of the group. Throws std::invalid_argument without positives.
double aupr(std::span<const ScoredExample> examples);

struct MeasureMetrics {
  double auroc = 0.0;
  double aupr = 0.0;
};

/// Detection results per uncertainty measure, in a fixed measure order
/// (max_prob, entropy, mutual_information, differential_entropy; absent
/// measures are omitted). Counts are after any balancing.
struct DetectionReport {
  std::vector<std::pair<std::string, MeasureMetrics>> measures;
  std::size_t num_positives = 0;
  std::size_t num_negatives = 0;
  std::optional<double> error_rate;
};

/// Degenerate detection input (for misclassification: everything correct or
/// everything wrong). Carries the observed error rate.
class DetectionError : public std::runtime_error {
 public:
  DetectionError(const std::string& what, double error_rate)
      : std::runtime_error(what), error_rate_(error_rate) {}
  double error_rate() const { return error_rate_; }

 private:
  double error_rate_;
};

/// Measures shared by every element of a score set, in report order.
/// max_prob is negated before ranking so that every measure ascends with
/// uncertainty.
std::vector<std::string> available_measures(std::span<const UncertaintyScores> scores);
double measure_value(const UncertaintyScores& scores, const std::string& measure);

/// Misclassification detection: positives are the misclassified examples;
/// one AUROC/AUPR pair per measure available in the scores, plus the error
/// rate. Throws DetectionError when every prediction is correct or every
/// prediction is wrong.
DetectionReport misclassification_detection(std::span<const UncertaintyScores> scores,
                                            std::span<const int> predicted,
                                            std::span<const int> labels);

/// OOD detection: positives are the OOD examples. When balanced, the larger
/// side is subsampled to the smaller side's size with the given seed.
DetectionReport ood_detection(std::span<const UncertaintyScores> in_scores,
                              std::span<const UncertaintyScores> out_scores, bool balanced,
                              std::uint64_t seed);

}  // namespace priornet
