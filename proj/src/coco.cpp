#include "drgen/coco.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "drgen/error.hpp"
#include "drgen/io.hpp"

namespace drgen {

CocoDataset export_coco(const std::vector<FrameLabels>& frames, const std::vector<std::string>& category_names) {
    CocoDataset d;
    std::vector<std::string> names = category_names;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw StructuralError("duplicate category name '" + *std::adjacent_find(names.begin(), names.end()) + "'");
    std::map<std::string, std::int64_t> category_id;
    for (std::size_t i = 0; i < names.size(); ++i) {
        category_id[names[i]] = static_cast<std::int64_t>(i + 1);
        d.categories.push_back({static_cast<std::int64_t>(i + 1), names[i]});
    }

    std::vector<const FrameLabels*> order;
    for (const FrameLabels& f : frames) order.push_back(&f);
    std::sort(order.begin(), order.end(),
              [](const FrameLabels* a, const FrameLabels* b) { return a->image.id < b->image.id; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i]->image.id == order[i - 1]->image.id)
            throw StructuralError("duplicate image id " + std::to_string(order[i]->image.id));

    std::int64_t next = 1;
    for (const FrameLabels* f : order) {
        d.images.push_back(f->image);
        std::vector<const InstanceAnnotation*> anns;
        for (const InstanceAnnotation& a : f->annotations) anns.push_back(&a);
        std::sort(anns.begin(), anns.end(), [](const InstanceAnnotation* a, const InstanceAnnotation* b) {
            return a->instance_id < b->instance_id;
        });
        for (std::size_t i = 1; i < anns.size(); ++i)
            if (anns[i]->instance_id == anns[i - 1]->instance_id)
                throw StructuralError("duplicate instance id " + std::to_string(anns[i]->instance_id) + " in image " +
                                      std::to_string(f->image.id));
        for (const InstanceAnnotation* a : anns) {
            const auto it = category_id.find(a->class_label);
            if (it == category_id.end()) throw StructuralError("unknown category '" + a->class_label + "'");
            CocoAnnotation c;
            c.id = next++;
            c.image_id = f->image.id;
            c.category_id = it->second;
            c.x = a->bbox.x;
            c.y = a->bbox.y;
            c.w = a->bbox.w;
            c.h = a->bbox.h;
            c.area = c.w * c.h;
            d.annotations.push_back(c);
        }
    }
    return d;
}

Json to_json(const CocoDataset& d) {
    Json images = Json::array(), annotations = Json::array(), categories = Json::array();
    for (const CocoImage& i : d.images)
        images.push_back({{"id", i.id}, {"file_name", i.file_name}, {"width", i.width}, {"height", i.height}});
    for (const CocoAnnotation& a : d.annotations)
        annotations.push_back({{"id", a.id},
                               {"image_id", a.image_id},
                               {"category_id", a.category_id},
                               {"bbox", {a.x, a.y, a.w, a.h}},
                               {"area", a.area},
                               {"iscrowd", a.iscrowd}});
    for (const CocoCategory& c : d.categories) categories.push_back({{"id", c.id}, {"name", c.name}});
    return Json{{"images", images}, {"annotations", annotations}, {"categories", categories}};
}

namespace {

const Json& member(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw StructuralError(where + ": missing '" + key + "'");
    return obj.at(key);
}

std::int64_t int_member(const Json& obj, const char* key, const std::string& where) {
    const Json& v = member(obj, key, where);
    if (!v.is_number_integer()) throw StructuralError(where + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

double num_member(const Json& obj, const char* key, const std::string& where) {
    const Json& v = member(obj, key, where);
    if (!v.is_number()) throw StructuralError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::array<double, 4> bbox_member(const Json& obj, const std::string& where) {
    const Json& b = member(obj, "bbox", where);
    if (!b.is_array() || b.size() != 4) throw StructuralError(where + ".bbox: expected [x, y, w, h]");
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (!b[k].is_number()) throw StructuralError(where + ".bbox: expected numbers");
        out[k] = b[k].get<double>();
        if (!std::isfinite(out[k])) throw StructuralError(where + ".bbox: values must be finite");
    }
    return out;
}

}  // namespace

CocoDataset coco_from_json(const Json& j) {
    if (!j.is_object()) throw StructuralError("COCO document must be an object");
    CocoDataset d;
    std::set<std::int64_t> image_ids, category_ids, annotation_ids;
    const Json& images = member(j, "images", "coco");
    const Json& annotations = member(j, "annotations", "coco");
    const Json& categories = member(j, "categories", "coco");
    if (!images.is_array() || !annotations.is_array() || !categories.is_array())
        throw StructuralError("coco: images, annotations and categories must be arrays");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::string w = "images[" + std::to_string(i) + "]";
        CocoImage im;
        im.id = int_member(images[i], "id", w);
        const Json& fname = member(images[i], "file_name", w);
        if (!fname.is_string()) throw StructuralError(w + ".file_name: expected a string");
        im.file_name = fname.get<std::string>();
        im.width = static_cast<int>(int_member(images[i], "width", w));
        im.height = static_cast<int>(int_member(images[i], "height", w));
        if (!image_ids.insert(im.id).second) throw StructuralError(w + ": duplicate image id " + std::to_string(im.id));
        d.images.push_back(im);
    }
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const std::string w = "categories[" + std::to_string(i) + "]";
        CocoCategory c;
        c.id = int_member(categories[i], "id", w);
        const Json& name = member(categories[i], "name", w);
        if (!name.is_string()) throw StructuralError(w + ".name: expected a string");
        c.name = name.get<std::string>();
        if (!category_ids.insert(c.id).second)
            throw StructuralError(w + ": duplicate category id " + std::to_string(c.id));
        d.categories.push_back(c);
    }
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const std::string w = "annotations[" + std::to_string(i) + "]";
        CocoAnnotation a;
        a.id = int_member(annotations[i], "id", w);
        a.image_id = int_member(annotations[i], "image_id", w);
        a.category_id = int_member(annotations[i], "category_id", w);
        const auto b = bbox_member(annotations[i], w);
        a.x = b[0];
        a.y = b[1];
        a.w = b[2];
        a.h = b[3];
        a.area = annotations[i].contains("area") ? num_member(annotations[i], "area", w) : a.w * a.h;
        a.iscrowd = annotations[i].contains("iscrowd") ? static_cast<int>(int_member(annotations[i], "iscrowd", w)) : 0;
        if (!annotation_ids.insert(a.id).second)
            throw StructuralError(w + ": duplicate annotation id " + std::to_string(a.id));
        if (!image_ids.count(a.image_id)) throw StructuralError(w + ": unknown image id " + std::to_string(a.image_id));
        if (!category_ids.count(a.category_id))
            throw StructuralError(w + ": unknown category id " + std::to_string(a.category_id));
        d.annotations.push_back(a);
    }
    return d;
}

CocoDataset load_coco(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("ground-truth file '" + path.string() + "' does not exist");
    try {
        return coco_from_json(Json::parse(read_text_file(path)));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

Json to_json(const std::vector<CocoResult>& results) {
    Json out = Json::array();
    for (const CocoResult& r : results)
        out.push_back({{"image_id", r.image_id},
                       {"category_id", r.category_id},
                       {"bbox", {r.x, r.y, r.w, r.h}},
                       {"score", r.score}});
    return out;
}

std::vector<CocoResult> results_from_json(const Json& j) {
    if (!j.is_array()) throw StructuralError("results document must be a JSON array");
    std::vector<CocoResult> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = "results[" + std::to_string(i) + "]";
        CocoResult r;
        r.image_id = int_member(j[i], "image_id", w);
        r.category_id = int_member(j[i], "category_id", w);
        const auto b = bbox_member(j[i], w);
        r.x = b[0];
        r.y = b[1];
        r.w = b[2];
        r.h = b[3];
        r.score = num_member(j[i], "score", w);
        if (!(r.w > 0.0) || !(r.h > 0.0)) throw StructuralError(w + ".bbox: width and height must be positive");
        if (!(r.score >= 0.0 && r.score <= 1.0)) throw StructuralError(w + ".score: must be in [0, 1]");
        out.push_back(r);
    }
    return out;
}

std::vector<CocoResult> load_results(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("predictions file '" + path.string() + "' does not exist");
    try {
        return results_from_json(Json::parse(read_text_file(path)));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

}  // namespace drgen
