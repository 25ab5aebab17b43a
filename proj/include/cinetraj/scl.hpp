#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cinetraj::scl {

// Closed vocabularies of the cinematographic description language. Token
// tables live in scl.cpp; declaration order is the canonical (lexicographic)
// enumeration order.

enum class ShotType { ECU, CU, MCU, MS, FS, LS, VLS, ELS };
enum class Elevation { WormsEye, Low, EyeLevel, High, BirdsEye };
enum class Side { Front, FrontLeft, Left, BackLeft, Back, BackRight, Right, FrontRight };
enum class FramingCell {
  TopLeft, TopCenter, TopRight,
  MiddleLeft, Center, MiddleRight,
  BottomLeft, BottomCenter, BottomRight,
};
enum class MovementKind { Static, PushIn, PullOut, Pan, Tilt, Orbit, Track, Crane };
enum class EasingKind { Linear, EaseIn, EaseOut, EaseInOut };

inline constexpr int kShotCount = 8;
inline constexpr int kElevationCount = 5;
inline constexpr int kSideCount = 8;
inline constexpr int kFramingCount = 9;
inline constexpr int kMovementCount = 8;
inline constexpr int kEasingCount = 4;

std::string_view token(ShotType v);
std::string_view token(Elevation v);
std::string_view token(Side v);
std::string_view token(FramingCell v);
std::string_view token(MovementKind v);
std::string_view token(EasingKind v);

std::optional<ShotType> parseShotType(std::string_view tok);
std::optional<Elevation> parseElevation(std::string_view tok);
std::optional<Side> parseSide(std::string_view tok);
std::optional<FramingCell> parseFramingCell(std::string_view tok);
std::optional<MovementKind> parseMovementKind(std::string_view tok);
std::optional<EasingKind> parseEasingKind(std::string_view tok);

struct CameraAngleSpec {
  Elevation elevation = Elevation::EyeLevel;
  Side side = Side::Front;
  bool operator==(const CameraAngleSpec&) const = default;
};

struct EndpointSpec {
  ShotType shot = ShotType::MS;
  CameraAngleSpec angle;
  FramingCell framing = FramingCell::Center;
  bool operator==(const EndpointSpec&) const = default;
};

struct MovementSpec {
  MovementKind kind = MovementKind::Static;
  EasingKind easing = EasingKind::Linear;
  int duration_frames = 30;
  bool operator==(const MovementSpec&) const = default;
};

/// One standardized cinematographic description: a start endpoint, an
/// optional end endpoint and the movement connecting them.
struct ScdRecord {
  EndpointSpec init;
  std::optional<EndpointSpec> end;
  MovementSpec movement;
  bool operator==(const ScdRecord&) const = default;
};

/// Parse failure; `offset` is the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses one canonical DSL line:
///   scd      := endpoint ";" movement ["->" endpoint]
///   endpoint := "shot=" SHOT "angle=" ELEV "side=" SIDE "frame=" CELL
///   movement := "move=" KIND ["ease=" EASE] ["dur=" INT]
/// Tokens are separated by spaces; omitted ease/dur default to linear/30.
ScdRecord parseScd(std::string_view line);

/// Canonical single-line form; parseScd(formatScd(x)) == x for valid records.
std::string formatScd(const ScdRecord& scd);

struct Violation {
  std::string field;
  std::string rule;
};

/// Empty result iff all record invariants hold.
std::vector<Violation> validateScd(const ScdRecord& scd);

struct EnumerateOptions {
  bool include_end = false;
  std::vector<MovementKind> kinds{
      MovementKind::Static, MovementKind::PushIn, MovementKind::PullOut,
      MovementKind::Pan, MovementKind::Tilt, MovementKind::Orbit,
      MovementKind::Track, MovementKind::Crane};
  std::vector<EasingKind> easings{EasingKind::Linear, EasingKind::EaseIn,
                                  EasingKind::EaseOut, EasingKind::EaseInOut};
  int duration_frames = 30;
};

/// Exhaustive, duplicate-free enumeration of the SCD universe in
/// lexicographic order (init fields, movement kind, easing, then end fields).
/// With include_end, static records still carry no end endpoint -- the record
/// invariant forbids a distinct one -- so the static block contributes one
/// record per easing. Random access makes index-range sharding trivial.
class ScdEnumerator {
 public:
  explicit ScdEnumerator(EnumerateOptions opts);

  std::uint64_t count() const { return count_; }
  ScdRecord at(std::uint64_t index) const;

  class Iterator {
   public:
    Iterator(const ScdEnumerator* e, std::uint64_t i) : enumerator_(e), index_(i) {}
    ScdRecord operator*() const { return enumerator_->at(index_); }
    Iterator& operator++() { ++index_; return *this; }
    bool operator!=(const Iterator& o) const { return index_ != o.index_; }

   private:
    const ScdEnumerator* enumerator_;
    std::uint64_t index_;
  };

  Iterator begin() const { return Iterator(this, 0); }
  Iterator end() const { return Iterator(this, count_); }

 private:
  EnumerateOptions opts_;
  std::uint64_t per_kind_block_ = 0;   // easings * end block (non-static kinds)
  std::uint64_t static_block_ = 0;     // easings
  std::uint64_t end_block_ = 1;        // end-endpoint combinations or 1
  std::uint64_t init_block_ = 0;       // sum of kind blocks
  std::uint64_t count_ = 0;
};

}  // namespace cinetraj::scl
