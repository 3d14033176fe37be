#include "hgi/transforms.hpp"

namespace hgi {

std::string_view kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::Hadamard: return "hadamard";
    case TransformKind::DCT: return "dct";
    case TransformKind::Haar: return "haar";
    case TransformKind::DFT: return "dft";
    case TransformKind::Identity: return "identity";
  }
  return "unknown";
}

char kind_letter(TransformKind kind) {
  switch (kind) {
    case TransformKind::Hadamard: return 'D';
    case TransformKind::DCT: return 'C';
    case TransformKind::Haar: return 'H';
    case TransformKind::DFT: return 'F';
    case TransformKind::Identity: return 'I';
  }
  return '?';
}

TransformKind parse_kind(std::string_view name) {
  for (auto kind : {TransformKind::Hadamard, TransformKind::DCT, TransformKind::Haar,
                    TransformKind::DFT, TransformKind::Identity}) {
    if (name == kind_name(kind)) return kind;
  }
  throw ParameterError("unknown transform kind '" + std::string(name) +
                       "' (expected hadamard, dct, haar, dft or identity)");
}

}  // namespace hgi
