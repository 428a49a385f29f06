#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "drgen/json_io.hpp"
#include "drgen/labeler.hpp"

namespace drgen {

struct CocoImage {
    std::int64_t id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    friend bool operator==(const CocoImage&, const CocoImage&) = default;
};

struct CocoCategory {
    std::int64_t id = 0;
    std::string name;
    friend bool operator==(const CocoCategory&, const CocoCategory&) = default;
};

struct CocoAnnotation {
    std::int64_t id = 0;
    std::int64_t image_id = 0;
    std::int64_t category_id = 0;
    double x = 0, y = 0, w = 0, h = 0;
    double area = 0;
    int iscrowd = 0;
    friend bool operator==(const CocoAnnotation&, const CocoAnnotation&) = default;
};

struct CocoDataset {
    std::vector<CocoImage> images;
    std::vector<CocoAnnotation> annotations;
    std::vector<CocoCategory> categories;
    friend bool operator==(const CocoDataset&, const CocoDataset&) = default;
};

/// One image record plus its labeler output.
struct FrameLabels {
    CocoImage image;
    std::vector<InstanceAnnotation> annotations;
};

/// Categories get ids 1..n in name order. Images are emitted by id and
/// annotations by (image id, instance id), numbered densely from 1.
/// Throws StructuralError on duplicate image ids or category names, or on an
/// annotation whose class is not a listed category.
CocoDataset export_coco(const std::vector<FrameLabels>& frames, const std::vector<std::string>& category_names);

Json to_json(const CocoDataset& d);
/// Reads a COCO detection document; checks ids are unique and references resolve.
CocoDataset coco_from_json(const Json& j);
CocoDataset load_coco(const std::filesystem::path& path);

/// Entry of a COCO results array.
struct CocoResult {
    std::int64_t image_id = 0;
    std::int64_t category_id = 0;
    double x = 0, y = 0, w = 0, h = 0;
    double score = 0;
    friend bool operator==(const CocoResult&, const CocoResult&) = default;
};

Json to_json(const std::vector<CocoResult>& results);
std::vector<CocoResult> results_from_json(const Json& j);
std::vector<CocoResult> load_results(const std::filesystem::path& path);

}  // namespace drgen
