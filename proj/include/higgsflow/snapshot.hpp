#pragma once

#include "higgsflow/bundle.hpp"

#include <string>

namespace higgsflow {

/// Metric snapshot file, little-endian throughout:
///
///   bytes 0..3   magic "HFMS"
///   u32          version (1)
///   u32          n
///   u32          grid points per real axis
///   u32          rank
///   f64 * n      side lengths
///   then num_points * rank * rank coefficients, each an (re, im) f64 pair,
///   point-major (axis 0 fastest), row-major within each matrix.
void save_metric(const std::string& path, const MetricField& h);
MetricField load_metric(const std::string& path);

}  // namespace higgsflow
