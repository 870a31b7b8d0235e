#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsr {

inline constexpr const char* kVersion = "0.1.0";

enum class ErrorCode {
  NonAssociativeTable,
  InvalidParameter,
  ForeignElement,
  NotAGroup,
  OrderTooLarge,
  IndexOutOfRange,
  PrefixTooLong,
  StreamExhausted,
  NonEmptyTailIntersection,
  NotDisjointProper,
  TooShort,
  NoStableBaseline,
  NotASubsemigroup,
  CarrierTooLarge,
  MalformedWitness,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonAssociativeTable: return "NonAssociativeTable";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ForeignElement: return "ForeignElement";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::PrefixTooLong: return "PrefixTooLong";
    case ErrorCode::StreamExhausted: return "StreamExhausted";
    case ErrorCode::NonEmptyTailIntersection: return "NonEmptyTailIntersection";
    case ErrorCode::NotDisjointProper: return "NotDisjointProper";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoStableBaseline: return "NoStableBaseline";
    case ErrorCode::NotASubsemigroup: return "NotASubsemigroup";
    case ErrorCode::CarrierTooLarge: return "CarrierTooLarge";
    case ErrorCode::MalformedWitness: return "MalformedWitness";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One semigroup element in canonical form. The payload layout is
/// family-specific (see SemigroupHandle); equality is bytewise, so two
/// elements of the same semigroup are equal iff their payloads match.
struct Element {
  std::vector<std::uint64_t> data;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    // FNV-1a over the payload words.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t w : e.data) {
      for (int i = 0; i < 8; ++i) {
        h ^= (w >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

inline Element scalar_element(std::uint64_t v) { return Element{{v}}; }

}  // namespace fsr
