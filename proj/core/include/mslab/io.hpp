#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mslab/boundary_probe.hpp"
#include "mslab/fourier.hpp"
#include "mslab/inner_function.hpp"

namespace mslab {

// Writes the full content to a sibling temporary file and renames it over
// the target, so readers never observe a partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// Boundary samples as CSV "j,theta,re,im" with a mandatory header row.
void write_samples_csv(const std::filesystem::path& path, const BoundaryFunction& f);

// Inverse of write_samples_csv; validates the index column, the power-of-two
// row count and the node angles.
BoundaryFunction read_samples_csv(const std::filesystem::path& path);

// Coefficient vector as CSV "k,re,im".
void write_coeffs_csv(const std::filesystem::path& path, const Eigen::VectorXcd& coeffs);

// Dense matrix as CSV "row,col,re,im" in row-major order.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXcd& m);

// Probe samples as CSV "depth,ray,re,im,norm_sq": kernel-norm sweeps carry
// the sample point in re/im, limit sweeps carry the sampled value.
void write_probe_csv(const std::filesystem::path& path,
                     const std::vector<AdcSample>& samples);
void write_probe_csv(const std::filesystem::path& path,
                     const std::vector<ProbeSample>& samples);

} // namespace mslab
