#include "pith/types.hpp"

namespace pith {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::UnreadableImage: return "unreadable_image";
    case ErrorCode::MaskMismatch: return "mask_mismatch";
    case ErrorCode::EmptyForeground: return "empty_foreground";
    case ErrorCode::EmptyLineSet: return "empty_line_set";
    case ErrorCode::NoEvidence: return "no_evidence";
    case ErrorCode::OutsideMask: return "outside_mask";
    case ErrorCode::MalformedPolygon: return "malformed_polygon";
    case ErrorCode::NoRecords: return "no_records";
    case ErrorCode::BadManifest: return "bad_manifest";
    case ErrorCode::BadAnnotation: return "bad_annotation";
  }
  return "unknown";
}

}  // namespace pith
