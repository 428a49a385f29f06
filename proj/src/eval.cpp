#include "drgen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "drgen/error.hpp"
#include "drgen/io.hpp"

namespace drgen {

double iou(const Box& a, const Box& b) {
    // Areas come from the same corner differences as the overlap, so iou(a, a) is exactly 1.
    const double ax1 = a.x + a.w, ay1 = a.y + a.h, bx1 = b.x + b.w, by1 = b.y + b.h;
    const double ix = std::max(0.0, std::min(ax1, bx1) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(ay1, by1) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = (ax1 - a.x) * (ay1 - a.y) + (bx1 - b.x) * (by1 - b.y) - inter;
    return inter > 0.0 && uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<Box>& gts, double iou_threshold) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dets[a].confidence > dets[b].confidence; });
    MatchResult r;
    r.true_positive.assign(dets.size(), false);
    std::vector<bool> taken(gts.size(), false);
    for (const std::size_t d : order) {
        double best = -1.0;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (taken[g]) continue;
            const double v = iou(dets[d].box, gts[g]);
            if (v >= iou_threshold && v > best) {
                best = v;
                best_gt = g;
            }
        }
        if (best_gt < gts.size()) {
            taken[best_gt] = true;
            r.true_positive[d] = true;
            ++r.matched_gt;
        }
    }
    r.unmatched_gt = gts.size() - r.matched_gt;
    return r;
}

std::optional<double> average_precision(const std::vector<ScoredMatch>& matches, std::size_t total_gt) {
    if (total_gt == 0) return std::nullopt;
    std::vector<ScoredMatch> ranked = matches;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ScoredMatch& a, const ScoredMatch& b) { return a.confidence > b.confidence; });
    const std::size_t n = ranked.size();
    std::vector<double> precision(n), recall(n);
    std::size_t tp = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (ranked[k].true_positive) ++tp;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(total_gt);
    }
    // Precision envelope: best precision at any rank at or below k.
    for (std::size_t k = n; k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);
    double ap = 0.0, prev_recall = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        ap += (recall[k] - prev_recall) * precision[k];
        prev_recall = recall[k];
    }
    return ap;
}

void UseCaseRule::validate(const std::string& path) const {
    if (required.empty() && label_categories.empty())
        throw ConfigError(path, "must constrain at least one category (required or label_categories)");
    for (const auto& [cat, n] : required)
        if (n < 0) throw ConfigError(path + ".required." + cat, "count must be >= 0");
    std::set<std::string> seen;
    for (const std::string& c : label_categories)
        if (!seen.insert(c).second) throw ConfigError(path + ".label_categories", "duplicate category '" + c + "'");
    if (!std::isfinite(confidence_threshold) || confidence_threshold < 0.0 || confidence_threshold > 1.0)
        throw ConfigError(path + ".confidence_threshold", "must be in [0, 1]");
}

UseCaseRule rule_from_json(const Json& j, const std::string& path) {
    using namespace json_field;
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    UseCaseRule r;
    r.name = string_or(j, "name", path, "");
    if (has(j, "required")) {
        const Json& req = j.at("required");
        if (!req.is_object()) throw ConfigError(path + ".required", "must map category names to counts");
        for (const auto& [cat, v] : req.items()) {
            if (!v.is_number_integer()) throw ConfigError(path + ".required." + cat, "must be an integer");
            r.required[cat] = v.get<int>();
        }
    }
    if (has(j, "label_categories")) {
        const Json& lc = j.at("label_categories");
        if (!lc.is_array()) throw ConfigError(path + ".label_categories", "must be an array of names");
        for (const Json& c : lc) {
            if (!c.is_string()) throw ConfigError(path + ".label_categories", "must be an array of names");
            r.label_categories.push_back(c.get<std::string>());
        }
    }
    r.confidence_threshold = number_or(j, "confidence_threshold", path, r.confidence_threshold);
    r.validate(path);
    return r;
}

Json to_json(const UseCaseRule& r) {
    Json req = Json::object();
    for (const auto& [cat, n] : r.required) req[cat] = n;
    return Json{{"name", r.name},
                {"required", req},
                {"label_categories", r.label_categories},
                {"confidence_threshold", r.confidence_threshold}};
}

UseCaseRule load_rule(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("rule file '" + path.string() + "' does not exist");
    try {
        return rule_from_json(Json::parse(read_text_file(path)));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

Verdict image_verdict(const std::vector<std::pair<std::string, double>>& detections, const UseCaseRule& rule) {
    std::map<std::string, int> counts;
    for (const auto& [cat, conf] : detections)
        if (conf >= rule.confidence_threshold) ++counts[cat];
    Verdict v;
    v.ok = true;
    for (const auto& [cat, n] : rule.required)
        if (counts[cat] < n) v.ok = false;
    if (!rule.label_categories.empty()) {
        int labels = 0;
        for (const std::string& c : rule.label_categories) {
            labels += counts[c];
            if (counts[c] > 0) v.predicted_class = c;
        }
        if (labels != 1) {
            v.ok = false;
            v.predicted_class.reset();
        }
    }
    return v;
}

EvalReport evaluate(const CocoDataset& gt, const std::vector<CocoResult>& predictions, const UseCaseRule& rule) {
    rule.validate();
    std::map<std::int64_t, std::string> category_name;
    for (const CocoCategory& c : gt.categories) category_name[c.id] = c.name;
    std::set<std::int64_t> image_ids;
    for (const CocoImage& im : gt.images) image_ids.insert(im.id);

    // (image, category) -> boxes / detections, in input order.
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Box>> gt_boxes;
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Detection>> dets;
    std::map<std::int64_t, std::vector<std::pair<std::string, double>>> gt_by_image, pred_by_image;
    for (const CocoAnnotation& a : gt.annotations) {
        gt_boxes[{a.image_id, a.category_id}].push_back({a.x, a.y, a.w, a.h});
        gt_by_image[a.image_id].emplace_back(category_name.at(a.category_id), 1.0);
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const CocoResult& p = predictions[i];
        if (!image_ids.count(p.image_id))
            throw StructuralError("prediction " + std::to_string(i) + " names image " + std::to_string(p.image_id) +
                                  " which is not in the ground truth");
        if (!category_name.count(p.category_id))
            throw StructuralError("prediction " + std::to_string(i) + " names unknown category " +
                                  std::to_string(p.category_id));
        dets[{p.image_id, p.category_id}].push_back({p.image_id, p.category_id, {p.x, p.y, p.w, p.h}, p.score});
        pred_by_image[p.image_id].emplace_back(category_name.at(p.category_id), p.score);
    }

    EvalReport r;
    r.images = gt.images.size();

    std::size_t conf_tp = 0, conf_det = 0, total_gt = 0;
    std::map<std::int64_t, std::vector<ScoredMatch>> scored;
    std::map<std::int64_t, std::size_t> gt_count;
    for (const std::int64_t image : image_ids) {
        for (const auto& [cat, name] : category_name) {
            const auto gi = gt_boxes.find({image, cat});
            const std::vector<Box> boxes = gi == gt_boxes.end() ? std::vector<Box>{} : gi->second;
            gt_count[cat] += boxes.size();
            total_gt += boxes.size();
            const auto di = dets.find({image, cat});
            if (di == dets.end()) continue;
            const MatchResult all = match_detections(di->second, boxes);
            for (std::size_t k = 0; k < di->second.size(); ++k)
                scored[cat].push_back({di->second[k].confidence, all.true_positive[k]});
            std::vector<Detection> confident;
            for (const Detection& d : di->second)
                if (d.confidence >= rule.confidence_threshold) confident.push_back(d);
            conf_det += confident.size();
            conf_tp += match_detections(confident, boxes).matched_gt;
        }
    }
    r.precision = conf_det ? static_cast<double>(conf_tp) / static_cast<double>(conf_det) : 1.0;
    r.recall = total_gt ? static_cast<double>(conf_tp) / static_cast<double>(total_gt) : 1.0;

    double ap_sum = 0.0;
    std::size_t ap_classes = 0;
    for (const auto& [cat, name] : category_name) {
        const auto ap = average_precision(scored[cat], gt_count[cat]);
        if (!ap) continue;
        r.per_class_ap[name] = *ap;
        ap_sum += *ap;
        ++ap_classes;
    }
    r.map50 = ap_classes ? ap_sum / static_cast<double>(ap_classes) : 0.0;

    std::size_t correct = 0;
    for (const std::int64_t image : image_ids) {
        const Verdict truth = image_verdict(gt_by_image[image], rule);
        const Verdict pred = image_verdict(pred_by_image[image], rule);
        const bool agree = truth.ok == pred.ok && (!truth.ok || truth.predicted_class == pred.predicted_class);
        if (agree) ++correct;
        if (!pred.ok && !truth.ok) ++r.confusion.tp;
        if (!pred.ok && truth.ok) ++r.confusion.fp;
        if (pred.ok && truth.ok) ++r.confusion.tn;
        if (pred.ok && !truth.ok) ++r.confusion.fn;
    }
    r.accuracy = r.images ? static_cast<double>(correct) / static_cast<double>(r.images) : 0.0;
    return r;
}

Json to_json(const EvalReport& r) {
    Json ap = Json::object();
    for (const auto& [name, v] : r.per_class_ap) ap[name] = v;
    return Json{{"images", r.images},
                {"accuracy", r.accuracy},
                {"precision", r.precision},
                {"recall", r.recall},
                {"map50", r.map50},
                {"per_class_ap", ap},
                {"confusion",
                 {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}}};
}

std::string format_report(const EvalReport& r) {
    char buf[256];
    std::string out = "A      P      R      mAP\n";
    std::snprintf(buf, sizeof buf, "%.2f   %.2f   %.2f   %.2f\n", r.accuracy, r.precision, r.recall, r.map50);
    out += buf;
    out += "\nper-class AP@50\n";
    for (const auto& [name, v] : r.per_class_ap) {
        std::snprintf(buf, sizeof buf, "  %-24s %.4f\n", name.c_str(), v);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "\nimages %zu  (NOK positive) TP %zu  FP %zu  TN %zu  FN %zu\n", r.images,
                  r.confusion.tp, r.confusion.fp, r.confusion.tn, r.confusion.fn);
    out += buf;
    return out;
}

}  // namespace drgen
