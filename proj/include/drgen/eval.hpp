#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drgen/coco.hpp"
#include "drgen/json_io.hpp"

namespace drgen {

struct Box {
    double x = 0, y = 0, w = 0, h = 0;
    friend bool operator==(const Box&, const Box&) = default;
};

/// Intersection over union; 0 for disjoint or empty boxes.
double iou(const Box& a, const Box& b);

struct Detection {
    std::int64_t image_id = 0;
    std::int64_t category_id = 0;
    Box box;
    double confidence = 0.0;
};

struct MatchResult {
    std::vector<bool> true_positive;  // per detection, in input order
    std::size_t matched_gt = 0;
    std::size_t unmatched_gt = 0;
};

/// Greedy one-to-one matching for one image and one category. Detections are
/// visited by descending confidence (ties: lower index first); each takes the
/// unmatched ground truth with the highest IoU >= threshold (ties: lower index).
MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<Box>& gts,
                             double iou_threshold = 0.5);

struct ScoredMatch {
    double confidence = 0.0;
    bool true_positive = false;
};

/// All-points interpolated AP. Items are ranked by descending confidence;
/// equal confidences keep their input order. Returns nullopt when
/// total_gt = 0 (the class is excluded from the mean).
std::optional<double> average_precision(const std::vector<ScoredMatch>& matches, std::size_t total_gt);

struct UseCaseRule {
    std::string name;
    /// Minimum number of confident detections per category for an OK verdict.
    std::map<std::string, int> required;
    /// Type-label case: exactly one confident detection from this set must be
    /// present; its category is the predicted class.
    std::vector<std::string> label_categories;
    double confidence_threshold = 0.5;

    void validate(const std::string& path = "rule") const;
};

UseCaseRule rule_from_json(const Json& j, const std::string& path = "rule");
Json to_json(const UseCaseRule& r);
UseCaseRule load_rule(const std::filesystem::path& path);

struct Verdict {
    bool ok = false;
    std::optional<std::string> predicted_class;
    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Verdict for one image from (category name, confidence) pairs.
Verdict image_verdict(const std::vector<std::pair<std::string, double>>& detections, const UseCaseRule& rule);

/// Image-level counts with NOK as the positive class.
struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct EvalReport {
    std::size_t images = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double map50 = 0.0;
    std::map<std::string, double> per_class_ap;
    ConfusionCounts confusion;
};

/// Scores predictions against ground truth. Precision and recall count
/// detections at or above the rule's confidence threshold (IoU 0.5 matching);
/// an empty denominator gives 1. mAP uses all detections. Throws
/// StructuralError for predictions naming unknown images or categories.
EvalReport evaluate(const CocoDataset& gt, const std::vector<CocoResult>& predictions, const UseCaseRule& rule);

Json to_json(const EvalReport& r);
/// Plain-text table with columns A, P, R, mAP followed by per-class AP and counts.
std::string format_report(const EvalReport& r);

}  // namespace drgen
