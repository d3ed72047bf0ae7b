#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpe/common.hpp"
#include "rpe/geometry.hpp"
#include "rpe/shadows.hpp"

namespace rpe {

/// Joint pursuer configuration: one position per pursuer.
struct Jpc {
  std::vector<Point> positions;

  std::size_t size() const { return positions.size(); }
  /// Positions of every pursuer except `excluded`.
  std::vector<Point> without(std::size_t excluded) const;

  friend bool operator==(const Jpc&, const Jpc&) = default;
};

/// n-tuple of shadow labels; entry i tracks contamination with pursuer i removed.
struct FailureLabel {
  std::vector<ShadowLabel> sub;

  bool all_clear() const;
  std::string str() const;  // sublabels joined by '|'

  friend bool operator==(const FailureLabel&, const FailureLabel&) = default;
  friend auto operator<=>(const FailureLabel&, const FailureLabel&) = default;
};

/// Componentwise dominance-or-equality: every sublabel of l is a subset of m's.
bool covers(const FailureLabel& l, const FailureLabel& m);

/// Pareto dominance: covers(l, m) and l != m.
bool dominates(const FailureLabel& l, const FailureLabel& m);

using VertexId = std::size_t;
using EdgeId = std::size_t;
using LabelId = std::size_t;

struct LabelRef {
  VertexId vertex{0};
  LabelId label{0};

  friend bool operator==(const LabelRef&, const LabelRef&) = default;
};

struct LabelRecord {
  FailureLabel label;
  VertexId vertex{0};
  std::optional<LabelRef> pred;  // absent only at the root
  bool alive{true};
};

struct Vertex {
  Jpc jpc;
  std::vector<ShadowSet> leave_one_out;  // entry i: shadows of jpc without pursuer i
  std::vector<LabelId> labels;           // live antichain
  std::vector<EdgeId> out_edges;
  std::vector<EdgeId> in_edges;
};

struct GraphEdge {
  VertexId from{0};
  VertexId to{0};
  std::vector<InfluenceRelation> relations;  // one per excluded pursuer; empty when caching is off
};

struct Solution {
  std::vector<Jpc> waypoints;
};

enum class RspegErrc { InvalidJpc, NotAllClear, BrokenProvenance };

const char* to_string(RspegErrc code);

class RspegError : public std::runtime_error {
 public:
  RspegError(RspegErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  RspegErrc code() const noexcept { return code_; }

 private:
  RspegErrc code_;
};

struct GraphOptions {
  bool cache_relations{true};
  RelationOptions relation;
};

struct GraphCounters {
  std::size_t relations_computed{0};
  std::size_t label_propagations{0};
  std::size_t labels_added{0};
  std::size_t labels_pruned{0};
  std::size_t skipped_edges{0};
  RelationStats relation;
};

struct AddReport {
  VertexId vertex{0};
  std::vector<EdgeId> new_edges;
  std::size_t labels_added{0};
  std::size_t labels_pruned{0};
  std::size_t skipped_edges{0};  // feasible motions rejected for ambiguous shadow correspondence
  std::optional<LabelRef> all_clear;
};

/// Rooted roadmap over joint configurations whose vertices carry antichains of
/// failure shadow labels. The environment must outlive the graph.
class Rspeg {
 public:
  /// The root starts with a single label whose sublabels are fully contaminated.
  Rspeg(const Environment& env, Jpc root, GraphOptions options = {});
  Rspeg(Environment&&, Jpc, GraphOptions = {}) = delete;

  /// Inserts w, links it both ways to every vertex reachable by a coordinate-wise
  /// straight motion in F, and propagates labels to a fixpoint. If the deadline
  /// expires the graph stays consistent but propagation may be incomplete.
  AddReport add_sample(const Jpc& w, const Deadline& deadline = {});

  /// Follows provenance from an all-clear label back to the root.
  Solution extract_solution(VertexId vertex, LabelId label) const;

  std::optional<LabelRef> find_all_clear() const;

  /// Carries a failure label across an edge, through the cache or from scratch.
  FailureLabel propagate_across(EdgeId edge, const FailureLabel& label, const Deadline& deadline = {});

  /// Recomputes one influence relation from geometry, bypassing the cache.
  InfluenceRelation compute_relation(EdgeId edge, std::size_t excluded, const Deadline& deadline = {});

  /// Antichains that a from-scratch propagation over the current graph would produce.
  std::vector<std::vector<FailureLabel>> recompute_fixpoint(const Deadline& deadline = {});

  const Environment& env() const { return *env_; }
  std::size_t n() const { return n_; }
  VertexId root() const { return 0; }
  const GraphOptions& options() const { return options_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<LabelRecord>& labels() const { return labels_; }
  std::size_t live_label_count() const;
  const GraphCounters& counters() const { return counters_; }

 private:
  void check_jpc(const Jpc& jpc) const;
  Vertex make_vertex(const Jpc& jpc) const;
  bool feasible(const Jpc& a, const Jpc& b) const;
  std::vector<InfluenceRelation> relations_for(const Jpc& a, const Jpc& b, const Deadline& deadline);
  FailureLabel root_label(const Vertex& v) const;
  FailureLabel carry(const GraphEdge& edge, const FailureLabel& label, const Deadline& deadline);
  bool try_insert(VertexId at, FailureLabel label, std::optional<LabelRef> pred, AddReport* report);
  void drain(const Deadline& deadline, AddReport* report);

  const Environment* env_;
  std::size_t n_;
  GraphOptions options_;
  std::vector<Vertex> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<LabelRecord> labels_;
  std::vector<LabelId> worklist_;
  std::size_t worklist_head_{0};
  std::optional<LabelRef> all_clear_;
  GraphCounters counters_;
};

}  // namespace rpe
