#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rpe/common.hpp"
#include "rpe/geometry.hpp"

namespace rpe {

enum class ShadowsErrc { LengthMismatch, InfeasibleEdge, AmbiguousCorrespondence };

const char* to_string(ShadowsErrc code);

class ShadowsError : public std::runtime_error {
 public:
  ShadowsError(ShadowsErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ShadowsErrc code() const noexcept { return code_; }

 private:
  ShadowsErrc code_;
};

/// One bit per shadow of a ShadowSet: 1 = contaminated, 0 = cleared.
class ShadowLabel {
 public:
  ShadowLabel() = default;
  explicit ShadowLabel(std::size_t size, bool contaminated = false);

  static ShadowLabel contaminated(std::size_t size) { return ShadowLabel(size, true); }
  static ShadowLabel cleared(std::size_t size) { return ShadowLabel(size, false); }
  /// Parses "0110": character i is bit i.
  static ShadowLabel parse(std::string_view bits);

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  bool all_clear() const;
  std::size_t count() const;
  std::string str() const;

  /// Every contaminated bit of this label is contaminated in `other`.
  bool subset_of(const ShadowLabel& other) const;
  ShadowLabel& operator|=(const ShadowLabel& other);

  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t hash() const;

  friend bool operator==(const ShadowLabel&, const ShadowLabel&) = default;
  friend std::strong_ordering operator<=>(const ShadowLabel& a, const ShadowLabel& b);

 private:
  std::size_t size_{0};
  std::vector<std::uint64_t> words_;
};

/// l dominates m when l != m and every contaminated shadow of l is contaminated in m.
bool dominates(const ShadowLabel& l, const ShadowLabel& m);

/// Which source shadows can feed undetected evaders into which destination shadows.
struct InfluenceRelation {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<ShadowLabel> reach;  // one row per source shadow, each of length cols

  InfluenceRelation() = default;
  InfluenceRelation(std::size_t rows, std::size_t cols);
  static InfluenceRelation identity(std::size_t n);

  bool at(std::size_t a, std::size_t b) const { return reach[a].test(b); }
  void set(std::size_t a, std::size_t b, bool value = true) { reach[a].set(b, value); }
  InfluenceRelation transposed() const;

  friend bool operator==(const InfluenceRelation&, const InfluenceRelation&) = default;
};

/// Destination bit b is contaminated iff some contaminated source bit a has reach[a][b].
ShadowLabel propagate(const ShadowLabel& label, const InfluenceRelation& relation);

enum class EventKind { Appeared, Persisted, Merged, Split, Disappeared };

const char* to_string(EventKind kind);

struct ShadowEvent {
  EventKind kind{EventKind::Persisted};
  std::optional<std::size_t> next;  // absent for Disappeared
  std::vector<std::size_t> prev;    // empty for Appeared
};

/// Positive-area overlaps between the shadows of two nearby instants.
struct OverlapGraph {
  InfluenceRelation adjacency;  // prev x next
  bool ambiguous{false};        // some shadow overlaps its candidates only by slivers
  std::size_t event_count{0};   // appear + disappear + merge + split occurrences
};

OverlapGraph overlap_graph(const Environment& env, const ShadowSet& prev, const ShadowSet& next);

/// Tags every next-shadow and every vanished prev-shadow. Throws
/// AmbiguousCorrespondence when a shadow's only overlaps are below the area floor.
std::vector<ShadowEvent> classify_events(const Environment& env, const ShadowSet& prev, const ShadowSet& next);

struct RelationOptions {
  int initial_steps{32};
  double min_step{1e-6};
  double critical_step{1e-5};  // width to which visibility-structure changes are isolated
};

struct RelationStats {
  std::size_t shadow_sets{0};
  std::size_t bisections{0};
  std::size_t critical_intervals{0};  // intervals holding a visibility-structure change
  std::size_t coincident_events{0};  // intervals accepted at min_step with more than one event
};

/// Combinatorial structure of a set of visibility polygons: each window as
/// (viewpoint, anchor vertex, hit feature), plus which windows of different
/// viewpoints cross. Shadow topology can only change where this changes.
struct VisibilitySignature {
  std::vector<std::array<int, 3>> windows;
  std::vector<std::pair<int, int>> crossings;

  bool operator==(const VisibilitySignature&) const = default;
};

VisibilitySignature visibility_signature(const Environment& env, std::span<const VisPolygon> polygons);

/// Shadow influence of the straight-line joint motion from `from` to `to`
/// (every point moving simultaneously). Rows follow shadow_set(from), columns
/// shadow_set(to). Times where the visibility signature changes are located
/// first, so events that cancel out between two samples are still seen.
InfluenceRelation influence_relation(const Environment& env, std::span<const Point> from, std::span<const Point> to,
                                     const RelationOptions& options = {}, const Deadline& deadline = {},
                                     RelationStats* stats = nullptr);

}  // namespace rpe
