#pragma once

// Reconstruction quality (MSE, PSNR, windowed SSIM) and bucket sparsity.

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hgi/transforms.hpp"

namespace hgi {

struct Roi {
  Index top = 0;
  Index left = 0;
  Index height = 0;
  Index width = 0;

  friend bool operator==(const Roi&, const Roi&) = default;
};

inline constexpr Index kSsimWindow = 8;
inline constexpr double kDefaultRelTol = 1e-6;

struct QualityReport {
  double psnr_db = std::numeric_limits<double>::infinity();  // +inf when mse == 0
  double ssim = 1.0;
  double mse = 0.0;
  std::optional<Roi> roi;
};

double mse(const MatrixX<double>& a, const MatrixX<double>& b, std::optional<Roi> roi = {});

/// 10 log10(peak^2 / mse), or +infinity when the inputs agree exactly.
double psnr(const MatrixX<double>& reference, const MatrixX<double>& test, double peak,
            std::optional<Roi> roi = {});

/// Mean SSIM over every fully interior 8x8 window (stride 1), with
/// c1 = (0.01 peak)^2, c2 = (0.03 peak)^2 and population (1/64) moments.
double ssim(const MatrixX<double>& reference, const MatrixX<double>& test, double peak,
            std::optional<Roi> roi = {});

QualityReport quality_report(const MatrixX<double>& reference, const MatrixX<double>& test,
                             double peak, std::optional<Roi> roi = {});

struct Significance {
  std::size_t count = 0;
  std::vector<std::pair<Index, Index>> positions;  // by descending |Y|
};

/// Entries with |Y(m, n)| > rel_tol * max |Y|. An all-zero Y yields count 0.
Significance count_significant(const MatrixX<double>& y, double rel_tol = kDefaultRelTol);

// +infinity PSNR serializes as the string "inf".
nlohmann::json to_json(const QualityReport& report);
nlohmann::json to_json(const Roi& roi);

}  // namespace hgi
