#pragma once

#include <string>

#include "audex/attribution.hpp"

namespace audex {

// ---------------------------------------------------------------------------
// Attribution tensor files.
//
// JSON layout: {method, config, targets, shape, values} where shape is
// [N, 19, 26], values is the flat row-major tensor, and config carries the
// method's parameters (epsilon for lrp; permutations, seed, and the flattened
// background for shap).  Keys are emitted sorted and doubles use the
// shortest representation that round-trips, so identical tensors serialize
// to identical bytes.
// ---------------------------------------------------------------------------

struct AttributionFile {
  AttributionTensor tensor;
  LrpConfig lrp;    // meaningful when tensor.method == Method::Lrp
  ShapConfig shap;  // meaningful when tensor.method == Method::Shap
};

void write_attribution_json(const AttributionFile& file,
                            const std::string& path);

AttributionFile read_attribution_json(const std::string& path);

// One row per (window, relative position) pair in window-major order,
// 26 value columns, 9 significant digits.
void write_attribution_csv(const AttributionTensor& tensor,
                           const std::string& path);

}  // namespace audex
