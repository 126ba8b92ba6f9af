#ifndef XAFCM_CLASSIFY_HPP
#define XAFCM_CLASSIFY_HPP

// Nearest-model classification: one frozen model per class, targets split
// into fixed-length segments, each segment assigned to the class whose model
// compresses it best.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xafcm/core.hpp"
#include "xafcm/detail/parallel.hpp"
#include "xafcm/error.hpp"
#include "xafcm/model.hpp"
#include "xafcm/nrc.hpp"

namespace xafcm {

struct ClassModel {
  std::string label;
  XaModel model;
};

/// Models sharing one ModelParams, kept in training order.
class ClassModelSet {
 public:
  ClassModelSet() = default;

  const std::vector<ClassModel>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const ModelParams& params() const { return entries_.at(0).model.params(); }

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].label == label) return i;
    }
    return std::nullopt;
  }

  void add(std::string label, XaModel model) {
    if (find(label)) throw Error(ErrorCode::DuplicateLabel, "duplicate class label '" + label + "'");
    if (!entries_.empty() && !(entries_.front().model.params() == model.params())) {
      throw Error(ErrorCode::InvalidParams, "class models must share (k, d, alpha, alphabet)");
    }
    entries_.push_back({std::move(label), std::move(model)});
  }

 private:
  std::vector<ClassModel> entries_;
};

struct LabeledSequence {
  std::string label;
  SymbolSequence sequence;
};

inline ClassModelSet train_class_models(const std::vector<LabeledSequence>& references,
                                        const ModelParams& params, std::size_t workers = 1) {
  if (references.empty()) throw Error(ErrorCode::EmptyInput, "no class references");
  std::set<std::string> labels;
  for (const auto& r : references) {
    if (!labels.insert(r.label).second) {
      throw Error(ErrorCode::DuplicateLabel, "duplicate class label '" + r.label + "'");
    }
    if (r.sequence.empty()) {
      throw Error(ErrorCode::EmptyReference, "reference for class '" + r.label + "' is empty");
    }
  }
  std::vector<XaModel> models(references.size());
  detail::parallel_for(references.size(), workers, [&](std::size_t i) {
    models[i] = learn(references[i].sequence, params);
  });
  ClassModelSet set;
  for (std::size_t i = 0; i < references.size(); ++i) {
    set.add(references[i].label, std::move(models[i]));
  }
  return set;
}

struct SegmentSplit {
  std::vector<SymbolSequence> segments;
  std::size_t dropped = 0;
};

/// Consecutive windows of exactly `segment_len` symbols starting every
/// `stride` symbols (stride 0 means stride = segment_len). Symbols not covered
/// by any window are reported as dropped.
inline SegmentSplit split_segments(const SymbolSequence& target, std::size_t segment_len,
                                   std::size_t stride = 0) {
  if (segment_len < 1) throw Error(ErrorCode::InvalidParams, "segment length must be >= 1");
  if (stride == 0) stride = segment_len;
  SegmentSplit out;
  const auto data = target.data();
  std::size_t covered = 0;
  for (std::size_t start = 0; start + segment_len <= data.size(); start += stride) {
    out.segments.emplace_back(
        target.alphabet(),
        std::vector<Symbol>(data.begin() + static_cast<std::ptrdiff_t>(start),
                            data.begin() + static_cast<std::ptrdiff_t>(start + segment_len)));
    covered = start + segment_len;
  }
  out.dropped = data.size() - covered;
  return out;
}

enum class DecisionScore { Nrc, Bits };

struct SegmentDecision {
  std::size_t segment_id = 0;
  std::optional<std::string> true_label;
  std::string predicted_label;
  std::vector<double> scores;  // one per model, in model-set order
};

/// Scores the segment against every model and returns the argmin. Ties go to
/// the lexicographically smallest label.
inline std::pair<std::string, std::vector<double>> classify_segment(
    const SymbolSequence& segment, const ClassModelSet& models,
    DecisionScore score = DecisionScore::Nrc) {
  if (segment.empty()) throw Error(ErrorCode::EmptyTarget, "segment is empty");
  if (models.size() == 0) throw Error(ErrorCode::EmptyInput, "no class models");
  std::vector<double> scores;
  scores.reserve(models.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto r = compress_bits(segment, models.entries()[i].model, {.keep_blocks = false});
    scores.push_back(score == DecisionScore::Nrc ? r.nrc() : r.total_bits);
    const auto& label = models.entries()[i].label;
    if (i > 0 && (scores[i] < scores[best] ||
                  (scores[i] == scores[best] && label < models.entries()[best].label))) {
      best = i;
    }
  }
  return {models.entries()[best].label, std::move(scores)};
}

struct ClassificationReport {
  std::vector<std::string> labels;  // model-set order; rows/cols of confusion
  std::vector<SegmentDecision> decisions;
  std::vector<std::vector<std::uint64_t>> confusion;  // [true][predicted]
  std::size_t dropped_symbols = 0;

  /// trace / total, or nullopt when no labeled segment was classified.
  std::optional<double> accuracy() const {
    std::uint64_t total = 0;
    std::uint64_t hit = 0;
    for (std::size_t i = 0; i < confusion.size(); ++i) {
      for (std::size_t j = 0; j < confusion[i].size(); ++j) {
        total += confusion[i][j];
        if (i == j) hit += confusion[i][j];
      }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(hit) / static_cast<double>(total);
  }
};

struct EvaluateOptions {
  std::size_t segment_len = 2000;
  std::size_t stride = 0;
  std::size_t workers = 1;
  DecisionScore score = DecisionScore::Nrc;
};

/// Segment ids run consecutively over all test sequences, in input order.
inline ClassificationReport evaluate(const std::vector<LabeledSequence>& test,
                                     const ClassModelSet& models, const EvaluateOptions& opt) {
  ClassificationReport report;
  for (const auto& e : models.entries()) report.labels.push_back(e.label);
  report.confusion.assign(models.size(), std::vector<std::uint64_t>(models.size(), 0));

  std::vector<std::size_t> truth;
  std::vector<SymbolSequence> segments;
  for (const auto& t : test) {
    auto idx = models.find(t.label);
    if (!idx) throw Error(ErrorCode::UnknownLabel, "no model for label '" + t.label + "'");
    auto split = split_segments(t.sequence, opt.segment_len, opt.stride);
    report.dropped_symbols += split.dropped;
    for (auto& s : split.segments) {
      truth.push_back(*idx);
      segments.push_back(std::move(s));
    }
  }

  report.decisions.resize(segments.size());
  detail::parallel_for(segments.size(), opt.workers, [&](std::size_t i) {
    auto [label, scores] = classify_segment(segments[i], models, opt.score);
    report.decisions[i] = {i, report.labels[truth[i]], std::move(label), std::move(scores)};
  });
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto predicted = *models.find(report.decisions[i].predicted_label);
    ++report.confusion[truth[i]][predicted];
  }
  return report;
}

}  // namespace xafcm

#endif  // XAFCM_CLASSIFY_HPP
