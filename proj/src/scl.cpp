#include "cinetraj/scl.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace cinetraj::scl {

namespace {

constexpr std::array<std::string_view, kShotCount> kShotTokens = {
    "ECU", "CU", "MCU", "MS", "FS", "LS", "VLS", "ELS"};
constexpr std::array<std::string_view, kElevationCount> kElevationTokens = {
    "worms_eye", "low", "eye_level", "high", "birds_eye"};
constexpr std::array<std::string_view, kSideCount> kSideTokens = {
    "front", "front_left", "left", "back_left",
    "back",  "back_right", "right", "front_right"};
constexpr std::array<std::string_view, kFramingCount> kFramingTokens = {
    "top_left",    "top_center",    "top_right",
    "middle_left", "center",        "middle_right",
    "bottom_left", "bottom_center", "bottom_right"};
constexpr std::array<std::string_view, kMovementCount> kMovementTokens = {
    "static", "push_in", "pull_out", "pan", "tilt", "orbit", "track", "crane"};
constexpr std::array<std::string_view, kEasingCount> kEasingTokens = {
    "linear", "ease_in", "ease_out", "ease_in_out"};

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& table,
                        std::string_view tok) {
  for (std::size_t i = 0; i < N; ++i)
    if (table[i] == tok) return static_cast<E>(i);
  return std::nullopt;
}

}  // namespace

std::string_view token(ShotType v) { return kShotTokens[static_cast<int>(v)]; }
std::string_view token(Elevation v) { return kElevationTokens[static_cast<int>(v)]; }
std::string_view token(Side v) { return kSideTokens[static_cast<int>(v)]; }
std::string_view token(FramingCell v) { return kFramingTokens[static_cast<int>(v)]; }
std::string_view token(MovementKind v) { return kMovementTokens[static_cast<int>(v)]; }
std::string_view token(EasingKind v) { return kEasingTokens[static_cast<int>(v)]; }

std::optional<ShotType> parseShotType(std::string_view t) { return lookup<ShotType>(kShotTokens, t); }
std::optional<Elevation> parseElevation(std::string_view t) { return lookup<Elevation>(kElevationTokens, t); }
std::optional<Side> parseSide(std::string_view t) { return lookup<Side>(kSideTokens, t); }
std::optional<FramingCell> parseFramingCell(std::string_view t) { return lookup<FramingCell>(kFramingTokens, t); }
std::optional<MovementKind> parseMovementKind(std::string_view t) { return lookup<MovementKind>(kMovementTokens, t); }
std::optional<EasingKind> parseEasingKind(std::string_view t) { return lookup<EasingKind>(kEasingTokens, t); }

namespace {

// Line scanner with byte-offset tracking. Tokens end at space, ';' or
// end-of-line; "->" stands alone between tokens.
class Scanner {
 public:
  explicit Scanner(std::string_view line) : line_(line) {}

  std::size_t pos() const { return pos_; }
  bool atEnd() const { return pos_ >= line_.size(); }

  void skipSpaces() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
  }

  bool peekIs(char c) const { return pos_ < line_.size() && line_[pos_] == c; }

  bool peekIs(std::string_view s) const {
    return line_.substr(pos_, s.size()) == s;
  }

  void expect(char c, const char* what) {
    if (!peekIs(c))
      throw ParseError(pos_, std::string("expected '") + c + "' " + what);
    ++pos_;
  }

  void consume(std::string_view s) { pos_ += s.size(); }

  /// Reads up to the next delimiter (space, ';' or EOL). Never empty.
  std::string_view readToken() {
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != ';')
      ++pos_;
    if (pos_ == start) throw ParseError(start, "expected a token");
    return line_.substr(start, pos_ - start);
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
};

struct KeyValue {
  std::string_view key;
  std::string_view value;
  std::size_t key_offset;
  std::size_t value_offset;
};

KeyValue readKeyValue(Scanner& sc) {
  const std::size_t start = sc.pos();
  const std::string_view tok = sc.readToken();
  const std::size_t eq = tok.find('=');
  if (eq == std::string_view::npos)
    throw ParseError(start, "expected key=value, got '" + std::string(tok) + "'");
  return KeyValue{tok.substr(0, eq), tok.substr(eq + 1), start, start + eq + 1};
}

template <typename E>
E parseEnumValue(std::optional<E> (*parse)(std::string_view), const KeyValue& kv,
                 const char* field) {
  const auto v = parse(kv.value);
  if (!v)
    throw ParseError(kv.value_offset, "unknown token '" + std::string(kv.value) +
                                          "' for field '" + field + "'");
  return *v;
}

void checkKey(const KeyValue& kv, std::string_view expected,
              std::span<const std::string_view> seen) {
  if (kv.key == expected) return;
  if (std::find(seen.begin(), seen.end(), kv.key) != seen.end())
    throw ParseError(kv.key_offset, "duplicate key '" + std::string(kv.key) + "'");
  throw ParseError(kv.key_offset, "expected key '" + std::string(expected) +
                                      "', got '" + std::string(kv.key) + "'");
}

EndpointSpec parseEndpoint(Scanner& sc) {
  EndpointSpec ep;
  constexpr std::array<std::string_view, 4> keys = {"shot", "angle", "side", "frame"};
  for (int slot = 0; slot < 4; ++slot) {
    sc.skipSpaces();
    const KeyValue kv = readKeyValue(sc);
    checkKey(kv, keys[slot], std::span(keys.data(), static_cast<std::size_t>(slot)));
    switch (slot) {
      case 0: ep.shot = parseEnumValue(parseShotType, kv, "shot"); break;
      case 1: ep.angle.elevation = parseEnumValue(parseElevation, kv, "angle"); break;
      case 2: ep.angle.side = parseEnumValue(parseSide, kv, "side"); break;
      case 3: ep.framing = parseEnumValue(parseFramingCell, kv, "frame"); break;
    }
  }
  return ep;
}

int parseDuration(const KeyValue& kv) {
  int value = 0;
  const auto* begin = kv.value.data();
  const auto* end = begin + kv.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || value <= 0)
    throw ParseError(kv.value_offset,
                     "field 'dur' requires a positive integer, got '" +
                         std::string(kv.value) + "'");
  return value;
}

MovementSpec parseMovement(Scanner& sc) {
  MovementSpec mv;
  sc.skipSpaces();
  const KeyValue kv = readKeyValue(sc);
  checkKey(kv, "move", {});
  mv.kind = parseEnumValue(parseMovementKind, kv, "move");

  bool saw_ease = false, saw_dur = false;
  for (;;) {
    sc.skipSpaces();
    if (sc.atEnd() || sc.peekIs("->")) return mv;
    const KeyValue next = readKeyValue(sc);
    if (next.key == "ease") {
      if (saw_ease) throw ParseError(next.key_offset, "duplicate key 'ease'");
      if (saw_dur) throw ParseError(next.key_offset, "'ease' must precede 'dur'");
      mv.easing = parseEnumValue(parseEasingKind, next, "ease");
      saw_ease = true;
    } else if (next.key == "dur") {
      if (saw_dur) throw ParseError(next.key_offset, "duplicate key 'dur'");
      mv.duration_frames = parseDuration(next);
      saw_dur = true;
    } else {
      throw ParseError(next.key_offset, "expected 'ease', 'dur' or '->', got '" +
                                            std::string(next.key) + "'");
    }
  }
}

}  // namespace

ScdRecord parseScd(std::string_view line) {
  Scanner sc(line);
  ScdRecord scd;
  sc.skipSpaces();
  scd.init = parseEndpoint(sc);
  sc.skipSpaces();
  sc.expect(';', "after the first endpoint");
  scd.movement = parseMovement(sc);
  sc.skipSpaces();
  if (sc.peekIs("->")) {
    sc.consume("->");
    scd.end = parseEndpoint(sc);
    sc.skipSpaces();
  }
  if (!sc.atEnd())
    throw ParseError(sc.pos(), "unexpected trailing input");
  return scd;
}

namespace {

void formatEndpoint(std::string& out, const EndpointSpec& ep) {
  out += "shot=";
  out += token(ep.shot);
  out += " angle=";
  out += token(ep.angle.elevation);
  out += " side=";
  out += token(ep.angle.side);
  out += " frame=";
  out += token(ep.framing);
}

}  // namespace

std::string formatScd(const ScdRecord& scd) {
  std::string out;
  out.reserve(128);
  formatEndpoint(out, scd.init);
  out += "; move=";
  out += token(scd.movement.kind);
  out += " ease=";
  out += token(scd.movement.easing);
  out += " dur=";
  out += std::to_string(scd.movement.duration_frames);
  if (scd.end) {
    out += " -> ";
    formatEndpoint(out, *scd.end);
  }
  return out;
}

namespace {

template <typename E>
bool inRange(E v, int count) {
  const int i = static_cast<int>(v);
  return i >= 0 && i < count;
}

}  // namespace

std::vector<Violation> validateScd(const ScdRecord& scd) {
  std::vector<Violation> out;
  auto checkEndpoint = [&](const EndpointSpec& ep, const std::string& prefix) {
    if (!inRange(ep.shot, kShotCount)) out.push_back({prefix + ".shot", "unknown value"});
    if (!inRange(ep.angle.elevation, kElevationCount))
      out.push_back({prefix + ".angle", "unknown value"});
    if (!inRange(ep.angle.side, kSideCount)) out.push_back({prefix + ".side", "unknown value"});
    if (!inRange(ep.framing, kFramingCount)) out.push_back({prefix + ".frame", "unknown value"});
  };
  checkEndpoint(scd.init, "init");
  if (scd.end) checkEndpoint(*scd.end, "end");
  if (!inRange(scd.movement.kind, kMovementCount))
    out.push_back({"movement.kind", "unknown value"});
  if (!inRange(scd.movement.easing, kEasingCount))
    out.push_back({"movement.easing", "unknown value"});
  if (scd.movement.duration_frames < 1)
    out.push_back({"movement.dur", "duration_frames must be positive"});
  else if (scd.movement.kind != MovementKind::Static && scd.movement.duration_frames < 2)
    out.push_back({"movement.dur", "duration_frames must be >= 2 for moving shots"});
  if (scd.movement.kind == MovementKind::Static && scd.end && !(*scd.end == scd.init))
    out.push_back({"end", "static movement requires the end endpoint to be absent or equal to init"});
  return out;
}

ScdEnumerator::ScdEnumerator(EnumerateOptions opts) : opts_(std::move(opts)) {
  if (opts_.kinds.empty())
    throw std::invalid_argument("enumerateScds: movement_kinds must be non-empty");
  if (opts_.easings.empty())
    throw std::invalid_argument("enumerateScds: easings must be non-empty");
  if (opts_.duration_frames < 1)
    throw std::invalid_argument("enumerateScds: duration_frames must be positive");
  const std::set<MovementKind> kind_set(opts_.kinds.begin(), opts_.kinds.end());
  const std::set<EasingKind> ease_set(opts_.easings.begin(), opts_.easings.end());
  if (kind_set.size() != opts_.kinds.size() || ease_set.size() != opts_.easings.size())
    throw std::invalid_argument("enumerateScds: duplicate enum values in subset");
  // Canonical order regardless of the order the caller listed them in.
  opts_.kinds.assign(kind_set.begin(), kind_set.end());
  opts_.easings.assign(ease_set.begin(), ease_set.end());

  const std::uint64_t endpoint_combos =
      static_cast<std::uint64_t>(kShotCount) * kElevationCount * kSideCount * kFramingCount;
  end_block_ = opts_.include_end ? endpoint_combos : 1;
  const std::uint64_t easings = opts_.easings.size();
  static_block_ = easings;
  per_kind_block_ = easings * end_block_;
  init_block_ = 0;
  for (const MovementKind k : opts_.kinds)
    init_block_ += (k == MovementKind::Static) ? static_block_ : per_kind_block_;
  count_ = endpoint_combos * init_block_;
}

ScdRecord ScdEnumerator::at(std::uint64_t index) const {
  if (index >= count_) throw std::out_of_range("ScdEnumerator index out of range");

  auto decodeEndpoint = [](std::uint64_t i) {
    EndpointSpec ep;
    ep.framing = static_cast<FramingCell>(i % kFramingCount);
    i /= kFramingCount;
    ep.angle.side = static_cast<Side>(i % kSideCount);
    i /= kSideCount;
    ep.angle.elevation = static_cast<Elevation>(i % kElevationCount);
    i /= kElevationCount;
    ep.shot = static_cast<ShotType>(i);
    return ep;
  };

  ScdRecord scd;
  scd.movement.duration_frames = opts_.duration_frames;
  const std::uint64_t init_index = index / init_block_;
  std::uint64_t rem = index % init_block_;
  scd.init = decodeEndpoint(init_index);

  for (const MovementKind k : opts_.kinds) {
    const std::uint64_t block = (k == MovementKind::Static) ? static_block_ : per_kind_block_;
    if (rem >= block) {
      rem -= block;
      continue;
    }
    scd.movement.kind = k;
    if (k == MovementKind::Static) {
      scd.movement.easing = opts_.easings[rem];
    } else {
      scd.movement.easing = opts_.easings[rem / end_block_];
      if (opts_.include_end) scd.end = decodeEndpoint(rem % end_block_);
    }
    return scd;
  }
  throw std::logic_error("ScdEnumerator: index decoding failed");  // unreachable
}

}  // namespace cinetraj::scl
