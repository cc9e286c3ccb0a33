#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace codehand::ink {

struct InkPoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

// One pen-down .. pen-up trace. Points keep capture order; timestamps
// never decrease within a stroke.
struct Stroke {
    std::vector<InkPoint> points;

    double min_y() const;
    double max_y() const;
    double mid_y() const { return (min_y() + max_y()) / 2.0; }
    double height() const { return max_y() - min_y(); }
    double start_time() const { return points.front().t; }
};

struct InkSample {
    std::vector<Stroke> strokes;
};

// Indices into InkSample::strokes for one text line, top to bottom.
struct LineGroup {
    std::vector<std::size_t> stroke_indices;
    double y_min = 0.0;
    double y_max = 0.0;
};

struct SegmentationConfig {
    // New-line threshold as a fraction of the median stroke height.
    double line_gap_ratio = 0.6;

    void validate() const;  // throws ConfigError unless ratio lies in (0, 2)
};

// Reads an ink sample from JSON: {"strokes": [[[x, y, t], ...], ...]}.
// Each point is an array of at least three numbers; extra entries are
// ignored. Strokes are sorted by the timestamp of their first point
// (stable, so simultaneous strokes keep file order). Throws ParseError
// naming the offending path for malformed input, negative coordinates
// or timestamps, or timestamps that go backwards within a stroke;
// throws EmptyInputError when there are no strokes or a stroke has no
// points.
InkSample parse_ink_file(const std::string& path);
InkSample parse_ink_text(std::string_view text, const std::string& origin);

// Groups strokes into text lines. A stroke opens a new line when its
// vertical midpoint falls below the current band by more than
// line_gap_ratio * median stroke height; a stroke above the band by
// more than the threshold rejoins the earlier line it overlaps most
// (dotting an i, crossing a t). Groups come back ordered by y_min.
std::vector<LineGroup> segment_lines(const InkSample& sample, const SegmentationConfig& config);

}  // namespace codehand::ink
