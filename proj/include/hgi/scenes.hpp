#pragma once

// Test objects and image file I/O.

#include <filesystem>

#include "hgi/image.hpp"
#include "hgi/transforms.hpp"

namespace hgi {

enum class StripeOrientation { Horizontal, Vertical };

/// Square-wave stripes. Horizontal stripes vary down the rows and the
/// image is cut into vertical bands of band_size columns; vertical stripes
/// vary across the columns with horizontal bands of band_size rows. Every
/// band is shifted cyclically by stagger_offset pixels relative to the
/// previous one.
struct StripeSpec {
  Index height = 1;
  Index width = 1;
  Index stripe_period = 2;  // pixels per full +1/-1 cycle, even
  StripeOrientation orientation = StripeOrientation::Horizontal;
  Index stagger_offset = 0;
  Index band_size = 1;
};

SceneImage staggered_stripes(const StripeSpec& spec);

/// The outer product of row m of `left` and row n of `right`, scaled to
/// max-abs 1, optionally passed through sign(). Binarizing a row that
/// contains zeros throws DegeneratePatternError.
SceneImage separable_object(const TransformMatrix& left, const TransformMatrix& right, Index m,
                            Index n, bool binarize);

/// Binary 0/1 wheel of blade_count bright sectors, each pi/blade_count wide,
/// alternating with dark sectors inside the disk inscribed in the image. A
/// small dark hub separates the blades at the center.
SceneImage windmill(Index rows, Index cols, int blade_count);

/// Loads a PGM (P5, 8-bit) or CSV scene. PGM bytes 0..255 map affinely onto
/// the declared range; CSV values are taken as-is and must lie in it.
SceneImage load_image(const std::filesystem::path& path, ValueRange range);

/// Writes PGM or CSV depending on the extension. PGM quantizes to 8 bits.
void save_image(const SceneImage& scene, const std::filesystem::path& path);

}  // namespace hgi
