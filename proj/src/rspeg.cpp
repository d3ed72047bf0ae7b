#include "rpe/rspeg.hpp"

#include <algorithm>

namespace rpe {

const char* to_string(RspegErrc code) {
  switch (code) {
    case RspegErrc::InvalidJpc: return "InvalidJpc";
    case RspegErrc::NotAllClear: return "NotAllClear";
    case RspegErrc::BrokenProvenance: return "BrokenProvenance";
  }
  return "Unknown";
}

std::vector<Point> Jpc::without(std::size_t excluded) const {
  std::vector<Point> out;
  out.reserve(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j != excluded) out.push_back(positions[j]);
  }
  return out;
}

bool FailureLabel::all_clear() const {
  return std::all_of(sub.begin(), sub.end(), [](const ShadowLabel& s) { return s.all_clear(); });
}

std::string FailureLabel::str() const {
  std::string out;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    if (i) out += '|';
    out += sub[i].str();
  }
  return out;
}

bool covers(const FailureLabel& l, const FailureLabel& m) {
  if (l.sub.size() != m.sub.size()) {
    throw ShadowsError(ShadowsErrc::LengthMismatch, "LengthMismatch: failure labels of length " +
                                                        std::to_string(l.sub.size()) + " and " +
                                                        std::to_string(m.sub.size()));
  }
  for (std::size_t i = 0; i < l.sub.size(); ++i) {
    if (l.sub[i].size() != m.sub[i].size()) {
      throw ShadowsError(ShadowsErrc::LengthMismatch, "LengthMismatch: sublabel " + std::to_string(i) +
                                                          " has lengths " + std::to_string(l.sub[i].size()) +
                                                          " and " + std::to_string(m.sub[i].size()));
    }
    if (!l.sub[i].subset_of(m.sub[i])) return false;
  }
  return true;
}

bool dominates(const FailureLabel& l, const FailureLabel& m) { return covers(l, m) && l != m; }

Rspeg::Rspeg(const Environment& env, Jpc root, GraphOptions options)
    : env_(&env), n_(root.size()), options_(options) {
  check_jpc(root);
  vertices_.push_back(make_vertex(root));
  try_insert(0, root_label(vertices_[0]), std::nullopt, nullptr);
  worklist_.clear();
  worklist_head_ = 0;
}

void Rspeg::check_jpc(const Jpc& jpc) const {
  if (jpc.size() < 2) {
    throw RspegError(RspegErrc::InvalidJpc, "InvalidJpc: a 1-failure-robust team needs at least 2 pursuers, got " +
                                                std::to_string(jpc.size()));
  }
  if (jpc.size() != n_) {
    throw RspegError(RspegErrc::InvalidJpc, "InvalidJpc: expected " + std::to_string(n_) + " positions, got " +
                                                std::to_string(jpc.size()));
  }
  for (std::size_t j = 0; j < jpc.size(); ++j) {
    if (!contains_point(*env_, jpc.positions[j])) {
      throw RspegError(RspegErrc::InvalidJpc, "InvalidJpc: pursuer " + std::to_string(j) + " lies outside F");
    }
  }
}

Vertex Rspeg::make_vertex(const Jpc& jpc) const {
  Vertex v;
  v.jpc = jpc;
  v.leave_one_out.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::vector<Point> rest = jpc.without(i);
    v.leave_one_out.push_back(shadow_set(*env_, rest));
  }
  return v;
}

bool Rspeg::feasible(const Jpc& a, const Jpc& b) const {
  for (std::size_t j = 0; j < n_; ++j) {
    if (!contains_segment(*env_, a.positions[j], b.positions[j])) return false;
  }
  return true;
}

std::vector<InfluenceRelation> Rspeg::relations_for(const Jpc& a, const Jpc& b, const Deadline& deadline) {
  std::vector<InfluenceRelation> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::vector<Point> from = a.without(i);
    const std::vector<Point> to = b.without(i);
    out.push_back(influence_relation(*env_, from, to, options_.relation, deadline, &counters_.relation));
    ++counters_.relations_computed;
  }
  return out;
}

FailureLabel Rspeg::root_label(const Vertex& v) const {
  FailureLabel l;
  for (const ShadowSet& s : v.leave_one_out) l.sub.push_back(ShadowLabel::contaminated(s.size()));
  return l;
}

InfluenceRelation Rspeg::compute_relation(EdgeId edge, std::size_t excluded, const Deadline& deadline) {
  const GraphEdge& e = edges_.at(edge);
  const std::vector<Point> from = vertices_[e.from].jpc.without(excluded);
  const std::vector<Point> to = vertices_[e.to].jpc.without(excluded);
  InfluenceRelation r = influence_relation(*env_, from, to, options_.relation, deadline, &counters_.relation);
  ++counters_.relations_computed;
  return r;
}

FailureLabel Rspeg::carry(const GraphEdge& edge, const FailureLabel& label, const Deadline& deadline) {
  ++counters_.label_propagations;
  FailureLabel out;
  out.sub.reserve(n_);
  const Jpc& a = vertices_[edge.from].jpc;
  const Jpc& b = vertices_[edge.to].jpc;
  for (std::size_t i = 0; i < n_; ++i) {
    if (options_.cache_relations) {
      out.sub.push_back(propagate(label.sub[i], edge.relations[i]));
    } else {
      const std::vector<Point> from = a.without(i);
      const std::vector<Point> to = b.without(i);
      const InfluenceRelation r =
          influence_relation(*env_, from, to, options_.relation, deadline, &counters_.relation);
      ++counters_.relations_computed;
      out.sub.push_back(propagate(label.sub[i], r));
    }
  }
  return out;
}

FailureLabel Rspeg::propagate_across(EdgeId edge, const FailureLabel& label, const Deadline& deadline) {
  return carry(edges_.at(edge), label, deadline);
}

bool Rspeg::try_insert(VertexId at, FailureLabel label, std::optional<LabelRef> pred, AddReport* report) {
  Vertex& v = vertices_[at];
  for (LabelId id : v.labels) {
    if (covers(labels_[id].label, label)) return false;
  }
  std::vector<LabelId> kept;
  kept.reserve(v.labels.size() + 1);
  for (LabelId id : v.labels) {
    if (covers(label, labels_[id].label)) {
      labels_[id].alive = false;
      ++counters_.labels_pruned;
      if (report) ++report->labels_pruned;
    } else {
      kept.push_back(id);
    }
  }
  const LabelId id = labels_.size();
  const bool clear = label.all_clear();
  labels_.push_back(LabelRecord{std::move(label), at, pred, true});
  kept.push_back(id);
  v.labels = std::move(kept);
  worklist_.push_back(id);
  ++counters_.labels_added;
  if (report) ++report->labels_added;
  if (clear && !all_clear_) all_clear_ = LabelRef{at, id};
  return true;
}

void Rspeg::drain(const Deadline& deadline, AddReport* report) {
  while (worklist_head_ < worklist_.size()) {
    const LabelId id = worklist_[worklist_head_];
    if (!labels_[id].alive) {
      ++worklist_head_;
      continue;
    }
    const VertexId at = labels_[id].vertex;
    // Out-edge list may grow only through add_sample, never during a drain.
    for (EdgeId e : vertices_[at].out_edges) {
      if (!labels_[id].alive) break;
      FailureLabel next = carry(edges_[e], labels_[id].label, deadline);
      try_insert(edges_[e].to, std::move(next), LabelRef{at, id}, report);
    }
    ++worklist_head_;
  }
  worklist_.clear();
  worklist_head_ = 0;
}

AddReport Rspeg::add_sample(const Jpc& w, const Deadline& deadline) {
  check_jpc(w);
  AddReport report;

  // Everything that may time out runs before the graph is touched.
  Vertex fresh = make_vertex(w);
  struct Pending {
    VertexId from;
    VertexId to;
    std::vector<InfluenceRelation> relations;
  };
  std::vector<Pending> pending;
  const VertexId id = vertices_.size();
  for (VertexId u = 0; u < vertices_.size(); ++u) {
    deadline.check();
    if (!feasible(vertices_[u].jpc, w)) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const Jpc& a = dir == 0 ? w : vertices_[u].jpc;
      const Jpc& b = dir == 0 ? vertices_[u].jpc : w;
      try {
        std::vector<InfluenceRelation> rel = relations_for(a, b, deadline);
        if (!options_.cache_relations) rel.clear();
        pending.push_back(Pending{dir == 0 ? id : u, dir == 0 ? u : id, std::move(rel)});
      } catch (const ShadowsError& e) {
        if (e.code() != ShadowsErrc::AmbiguousCorrespondence) throw;
        ++report.skipped_edges;
        ++counters_.skipped_edges;
      }
    }
  }

  report.vertex = id;
  vertices_.push_back(std::move(fresh));
  for (Pending& p : pending) {
    const EdgeId e = edges_.size();
    edges_.push_back(GraphEdge{p.from, p.to, std::move(p.relations)});
    vertices_[p.from].out_edges.push_back(e);
    vertices_[p.to].in_edges.push_back(e);
    report.new_edges.push_back(e);
  }

  // Seed with the labels that were live before this sample, then run to a fixpoint.
  worklist_.clear();
  worklist_head_ = 0;
  for (EdgeId e : report.new_edges) {
    const std::vector<LabelId> sources = vertices_[edges_[e].from].labels;
    for (LabelId l : sources) {
      if (!labels_[l].alive) continue;
      FailureLabel next = carry(edges_[e], labels_[l].label, deadline);
      try_insert(edges_[e].to, std::move(next), LabelRef{edges_[e].from, l}, &report);
    }
  }
  drain(deadline, &report);
  report.all_clear = all_clear_;
  return report;
}

std::optional<LabelRef> Rspeg::find_all_clear() const { return all_clear_; }

std::size_t Rspeg::live_label_count() const {
  std::size_t n = 0;
  for (const Vertex& v : vertices_) n += v.labels.size();
  return n;
}

Solution Rspeg::extract_solution(VertexId vertex, LabelId label) const {
  if (label >= labels_.size() || labels_[label].vertex != vertex) {
    throw RspegError(RspegErrc::BrokenProvenance, "BrokenProvenance: label " + std::to_string(label) +
                                                      " is not stored at vertex " + std::to_string(vertex));
  }
  if (!labels_[label].label.all_clear()) {
    throw RspegError(RspegErrc::NotAllClear,
                     "NotAllClear: label " + labels_[label].label.str() + " still has contaminated shadows");
  }
  std::vector<VertexId> path{vertex};
  LabelRef cur{vertex, label};
  while (labels_[cur.label].pred) {
    const LabelRef p = *labels_[cur.label].pred;
    if (p.label >= labels_.size() || labels_[p.label].vertex != p.vertex || path.size() > labels_.size()) {
      throw RspegError(RspegErrc::BrokenProvenance, "BrokenProvenance: predecessor chain broken at label " +
                                                        std::to_string(cur.label));
    }
    path.push_back(p.vertex);
    cur = p;
  }
  if (cur.vertex != root()) {
    throw RspegError(RspegErrc::BrokenProvenance, "BrokenProvenance: chain ends at vertex " +
                                                      std::to_string(cur.vertex) + " instead of the root");
  }
  Solution s;
  for (auto it = path.rbegin(); it != path.rend(); ++it) s.waypoints.push_back(vertices_[*it].jpc);
  return s;
}

std::vector<std::vector<FailureLabel>> Rspeg::recompute_fixpoint(const Deadline& deadline) {
  std::vector<std::vector<FailureLabel>> sets(vertices_.size());
  std::vector<std::pair<VertexId, FailureLabel>> queue;
  std::size_t head = 0;
  auto insert = [&](VertexId at, FailureLabel l) {
    auto& set = sets[at];
    for (const FailureLabel& m : set) {
      if (covers(m, l)) return;
    }
    std::erase_if(set, [&](const FailureLabel& m) { return covers(l, m); });
    set.push_back(l);
    queue.emplace_back(at, std::move(l));
  };
  insert(root(), root_label(vertices_[root()]));
  while (head < queue.size()) {
    const auto [at, label] = queue[head++];
    if (std::find(sets[at].begin(), sets[at].end(), label) == sets[at].end()) continue;
    for (EdgeId e : vertices_[at].out_edges) insert(edges_[e].to, carry(edges_[e], label, deadline));
  }
  for (auto& set : sets) std::sort(set.begin(), set.end());
  return sets;
}

}  // namespace rpe
