#include "hgi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgi/errors.hpp"

namespace hgi {

namespace {

Roi resolve_roi(const MatrixX<double>& a, const MatrixX<double>& b, std::optional<Roi> roi) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("images differ in shape: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  if (a.size() == 0) throw ShapeError("empty image");
  if (!roi) return {0, 0, a.rows(), a.cols()};
  if (roi->top < 0 || roi->left < 0 || roi->height < 1 || roi->width < 1 ||
      roi->top + roi->height > a.rows() || roi->left + roi->width > a.cols()) {
    throw ShapeError("roi lies outside the " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " image");
  }
  return *roi;
}

}  // namespace

double mse(const MatrixX<double>& a, const MatrixX<double>& b, std::optional<Roi> roi) {
  const Roi r = resolve_roi(a, b, roi);
  const auto diff = a.block(r.top, r.left, r.height, r.width) - b.block(r.top, r.left, r.height, r.width);
  return diff.squaredNorm() / static_cast<double>(r.height * r.width);
}

double psnr(const MatrixX<double>& reference, const MatrixX<double>& test, double peak,
            std::optional<Roi> roi) {
  if (!(peak > 0.0)) throw ParameterError("peak must be > 0");
  const double err = mse(reference, test, roi);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

double ssim(const MatrixX<double>& reference, const MatrixX<double>& test, double peak,
            std::optional<Roi> roi) {
  if (!(peak > 0.0)) throw ParameterError("peak must be > 0");
  const Roi r = resolve_roi(reference, test, roi);
  if (r.height < kSsimWindow || r.width < kSsimWindow) {
    throw ShapeError("ssim needs at least an 8x8 region");
  }
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const double count = static_cast<double>(kSsimWindow * kSsimWindow);

  double total = 0.0;
  Index windows = 0;
  for (Index i = r.top; i + kSsimWindow <= r.top + r.height; ++i) {
    for (Index j = r.left; j + kSsimWindow <= r.left + r.width; ++j) {
      const auto x = reference.block(i, j, kSsimWindow, kSsimWindow).array();
      const auto y = test.block(i, j, kSsimWindow, kSsimWindow).array();
      const double mx = x.sum() / count;
      const double my = y.sum() / count;
      const double vx = (x - mx).square().sum() / count;
      const double vy = (y - my).square().sum() / count;
      const double cxy = ((x - mx) * (y - my)).sum() / count;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

QualityReport quality_report(const MatrixX<double>& reference, const MatrixX<double>& test,
                             double peak, std::optional<Roi> roi) {
  QualityReport report;
  report.mse = mse(reference, test, roi);
  report.psnr_db = psnr(reference, test, peak, roi);
  report.ssim = ssim(reference, test, peak, roi);
  report.roi = roi;
  return report;
}

Significance count_significant(const MatrixX<double>& y, double rel_tol) {
  if (y.size() == 0) throw ShapeError("bucket matrix is empty");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be > 0");
  Significance out;
  const double top = y.cwiseAbs().maxCoeff();
  if (top == 0.0) return out;
  const double threshold = rel_tol * top;
  for (Index m = 0; m < y.rows(); ++m) {
    for (Index n = 0; n < y.cols(); ++n) {
      if (std::abs(y(m, n)) > threshold) out.positions.emplace_back(m, n);
    }
  }
  std::stable_sort(out.positions.begin(), out.positions.end(), [&](const auto& a, const auto& b) {
    return std::abs(y(a.first, a.second)) > std::abs(y(b.first, b.second));
  });
  out.count = out.positions.size();
  return out;
}

nlohmann::json to_json(const Roi& roi) {
  return {{"top", roi.top}, {"left", roi.left}, {"height", roi.height}, {"width", roi.width}};
}

nlohmann::json to_json(const QualityReport& report) {
  nlohmann::json j;
  if (std::isinf(report.psnr_db)) {
    j["psnr_db"] = "inf";
  } else {
    j["psnr_db"] = report.psnr_db;
  }
  j["ssim"] = report.ssim;
  j["mse"] = report.mse;
  j["roi"] = report.roi ? to_json(*report.roi) : nlohmann::json(nullptr);
  return j;
}

}  // namespace hgi
