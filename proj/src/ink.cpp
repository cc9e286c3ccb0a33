#include "codehand/ink.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codehand/errors.hpp"

namespace codehand::ink {

double Stroke::min_y() const {
    double y = points.front().y;
    for (const InkPoint& p : points) y = std::min(y, p.y);
    return y;
}

double Stroke::max_y() const {
    double y = points.front().y;
    for (const InkPoint& p : points) y = std::max(y, p.y);
    return y;
}

void SegmentationConfig::validate() const {
    if (!(line_gap_ratio > 0.0 && line_gap_ratio < 2.0)) {
        throw ConfigError("line_gap_ratio must lie in (0, 2)");
    }
}

namespace {

std::string point_path(std::size_t stroke, std::size_t point) {
    return "strokes[" + std::to_string(stroke) + "][" + std::to_string(point) + "]";
}

}  // namespace

InkSample parse_ink_text(std::string_view text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("strokes")) {
        throw ParseError(origin + ": expected an object with a \"strokes\" array");
    }
    const nlohmann::json& strokes = doc["strokes"];
    if (!strokes.is_array()) {
        throw ParseError(origin + ": \"strokes\" is not an array");
    }
    if (strokes.empty()) {
        throw EmptyInputError(origin + ": sample has no strokes");
    }

    InkSample sample;
    sample.strokes.reserve(strokes.size());
    for (std::size_t i = 0; i < strokes.size(); ++i) {
        const nlohmann::json& raw = strokes[i];
        if (!raw.is_array()) {
            throw ParseError(origin + ": strokes[" + std::to_string(i) + "] is not an array");
        }
        if (raw.empty()) {
            throw EmptyInputError(origin + ": strokes[" + std::to_string(i) + "] has no points");
        }
        Stroke stroke;
        stroke.points.reserve(raw.size());
        for (std::size_t j = 0; j < raw.size(); ++j) {
            const nlohmann::json& entry = raw[j];
            if (!entry.is_array() || entry.size() < 3 || !entry[0].is_number() ||
                !entry[1].is_number() || !entry[2].is_number()) {
                throw ParseError(origin + ": " + point_path(i, j) +
                                 " is not an [x, y, t] array");
            }
            InkPoint point{entry[0].get<double>(), entry[1].get<double>(),
                           entry[2].get<double>()};
            if (point.x < 0.0 || point.y < 0.0 || point.t < 0.0) {
                throw ParseError(origin + ": " + point_path(i, j) + " has a negative value");
            }
            if (!stroke.points.empty() && point.t < stroke.points.back().t) {
                throw ParseError(origin + ": timestamp goes backwards at " + point_path(i, j));
            }
            stroke.points.push_back(point);
        }
        sample.strokes.push_back(std::move(stroke));
    }

    std::stable_sort(sample.strokes.begin(), sample.strokes.end(),
                     [](const Stroke& a, const Stroke& b) {
                         return a.start_time() < b.start_time();
                     });
    return sample;
}

InkSample parse_ink_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read ink file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ink_text(buf.str(), path);
}

namespace {

double median_height(const InkSample& sample) {
    std::vector<double> heights;
    heights.reserve(sample.strokes.size());
    for (const Stroke& stroke : sample.strokes) heights.push_back(stroke.height());
    std::sort(heights.begin(), heights.end());
    std::size_t n = heights.size();
    if (n % 2 == 1) return heights[n / 2];
    return (heights[n / 2 - 1] + heights[n / 2]) / 2.0;
}

double band_overlap(double lo_a, double hi_a, double lo_b, double hi_b) {
    return std::max(0.0, std::min(hi_a, hi_b) - std::max(lo_a, lo_b));
}

double band_gap(double lo_a, double hi_a, double lo_b, double hi_b) {
    return std::max({lo_b - hi_a, lo_a - hi_b, 0.0});
}

}  // namespace

std::vector<LineGroup> segment_lines(const InkSample& sample, const SegmentationConfig& config) {
    config.validate();
    if (sample.strokes.empty()) throw EmptyInputError("no strokes to segment");

    double threshold = config.line_gap_ratio * median_height(sample);

    std::vector<LineGroup> groups;
    std::size_t current = 0;

    auto extend = [&](LineGroup& group, std::size_t index, double lo, double hi) {
        group.stroke_indices.push_back(index);
        group.y_min = std::min(group.y_min, lo);
        group.y_max = std::max(group.y_max, hi);
    };

    for (std::size_t i = 0; i < sample.strokes.size(); ++i) {
        const Stroke& stroke = sample.strokes[i];
        double lo = stroke.min_y();
        double hi = stroke.max_y();
        double mid = (lo + hi) / 2.0;

        if (groups.empty()) {
            groups.push_back({{i}, lo, hi});
            current = 0;
            continue;
        }
        LineGroup& band = groups[current];
        if (mid > band.y_max + threshold) {
            groups.push_back({{i}, lo, hi});
            current = groups.size() - 1;
            continue;
        }
        if (mid < band.y_min - threshold) {
            // Late return to an earlier line: an i-dot or t-cross drawn
            // after moving on. Attach to the line it overlaps most; the
            // writing position stays on the current line.
            std::size_t best = 0;
            double best_overlap = -1.0;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                double overlap = band_overlap(lo, hi, groups[g].y_min, groups[g].y_max);
                if (overlap > best_overlap) {
                    best_overlap = overlap;
                    best = g;
                }
            }
            if (best_overlap <= 0.0) {
                double best_gap = 0.0;
                bool found = false;
                for (std::size_t g = 0; g < groups.size(); ++g) {
                    double gap = band_gap(lo, hi, groups[g].y_min, groups[g].y_max);
                    if (!found || gap < best_gap) {
                        best_gap = gap;
                        best = g;
                        found = true;
                    }
                }
            }
            extend(groups[best], i, lo, hi);
            continue;
        }
        extend(band, i, lo, hi);
    }

    std::stable_sort(groups.begin(), groups.end(),
                     [](const LineGroup& a, const LineGroup& b) { return a.y_min < b.y_min; });
    return groups;
}

}  // namespace codehand::ink
