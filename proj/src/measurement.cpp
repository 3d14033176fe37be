#include "hgi/measurement.hpp"

#include <algorithm>

namespace hgi {

HybridSpec HybridSpec::pair(TransformKind left, Index rows, TransformKind right, Index cols,
                            Index left_kept, Index right_kept) {
  HybridSpec spec;
  spec.left_chain.push_back({left, rows, left_kept > 0 ? left_kept : rows});
  spec.right_chain.push_back({right, cols, right_kept > 0 ? right_kept : cols});
  return spec;
}

Index HybridSpec::rows() const { return left_chain.empty() ? 0 : left_chain.front().order; }
Index HybridSpec::cols() const { return right_chain.empty() ? 0 : right_chain.front().order; }
Index HybridSpec::left_kept() const { return left_chain.empty() ? 0 : left_chain.back().kept_rows; }
Index HybridSpec::right_kept() const {
  return right_chain.empty() ? 0 : right_chain.back().kept_rows;
}

double HybridSpec::sampling_rate() const {
  const double full = static_cast<double>(rows()) * static_cast<double>(cols());
  if (full == 0.0) return 0.0;
  return static_cast<double>(left_kept()) * static_cast<double>(right_kept()) / full;
}

bool HybridSpec::uses_dft() const {
  auto is_dft = [](const ChainEntry& e) { return e.kind == TransformKind::DFT; };
  return std::ranges::any_of(left_chain, is_dft) || std::ranges::any_of(right_chain, is_dft);
}

std::string HybridSpec::name() const {
  std::string out;
  for (auto it = left_chain.rbegin(); it != left_chain.rend(); ++it) out += kind_letter(it->kind);
  out += '-';
  for (auto it = right_chain.rbegin(); it != right_chain.rend(); ++it) out += kind_letter(it->kind);
  return out;
}

namespace {

void validate_side(const std::vector<ChainEntry>& chain, const char* side) {
  const std::string where(side);
  if (chain.empty()) throw CompositionError(where + " chain is empty");
  const Index order = chain.front().order;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ChainEntry& e = chain[i];
    if (e.order < 1) throw InvalidOrderError(where + " chain order must be >= 1");
    if (e.order != order) {
      throw CompositionError(where + " chain mixes orders " + std::to_string(order) + " and " +
                             std::to_string(e.order));
    }
    const bool outermost = i + 1 == chain.size();
    if (outermost) {
      if (e.kept_rows < 1 || e.kept_rows > e.order) {
        throw CompositionError(where + " kept_rows must lie in [1, " + std::to_string(e.order) +
                               "]");
      }
    } else if (e.kept_rows != e.order) {
      throw CompositionError(where + " chain truncates an inner factor; only the outermost may");
    }
  }
}

}  // namespace

void validate(const HybridSpec& spec) {
  validate_side(spec.left_chain, "left");
  validate_side(spec.right_chain, "right");
}

HybridSpec pad_chains(HybridSpec spec) {
  auto pad = [](std::vector<ChainEntry>& chain, std::size_t length) {
    if (chain.empty() || chain.size() >= length) return;
    const Index order = chain.front().order;
    chain.insert(chain.begin(), length - chain.size(),
                 ChainEntry{TransformKind::Identity, order, order});
  };
  const std::size_t length = std::max(spec.left_chain.size(), spec.right_chain.size());
  pad(spec.left_chain, length);
  pad(spec.right_chain, length);
  return spec;
}

Footprint footprint_report(Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw ParameterError("image dimensions must be >= 1");
  const auto m = static_cast<std::uint64_t>(rows);
  const auto n = static_cast<std::uint64_t>(cols);
  return {(m * n) * (m * n), n * n, m * m};
}

}  // namespace hgi
