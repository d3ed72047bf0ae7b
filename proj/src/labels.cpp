#include <bit>
#include <functional>

#include "rpe/shadows.hpp"

namespace rpe {

const char* to_string(ShadowsErrc code) {
  switch (code) {
    case ShadowsErrc::LengthMismatch: return "LengthMismatch";
    case ShadowsErrc::InfeasibleEdge: return "InfeasibleEdge";
    case ShadowsErrc::AmbiguousCorrespondence: return "AmbiguousCorrespondence";
  }
  return "Unknown";
}

ShadowLabel::ShadowLabel(std::size_t size, bool contaminated) : size_(size), words_((size + 63) / 64, 0) {
  if (contaminated) {
    for (std::size_t i = 0; i < size; ++i) set(i);
  }
}

ShadowLabel ShadowLabel::parse(std::string_view bits) {
  ShadowLabel out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("shadow label must be a 0/1 string, got '" + std::string(bits) + "'");
    }
  }
  return out;
}

void ShadowLabel::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

bool ShadowLabel::all_clear() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t ShadowLabel::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string ShadowLabel::str() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) out[i] = '1';
  }
  return out;
}

bool ShadowLabel::subset_of(const ShadowLabel& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] & ~other.words_[w]) return false;
  }
  return true;
}

ShadowLabel& ShadowLabel::operator|=(const ShadowLabel& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

std::size_t ShadowLabel::hash() const {
  std::size_t h = std::hash<std::size_t>{}(size_);
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::strong_ordering operator<=>(const ShadowLabel& a, const ShadowLabel& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  return a.str() <=> b.str();
}

bool dominates(const ShadowLabel& l, const ShadowLabel& m) {
  if (l.size() != m.size()) {
    throw ShadowsError(ShadowsErrc::LengthMismatch, "LengthMismatch: labels of length " + std::to_string(l.size()) +
                                                        " and " + std::to_string(m.size()));
  }
  return l != m && l.subset_of(m);
}

InfluenceRelation::InfluenceRelation(std::size_t r, std::size_t c) : rows(r), cols(c), reach(r, ShadowLabel(c)) {}

InfluenceRelation InfluenceRelation::identity(std::size_t n) {
  InfluenceRelation out(n, n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, i);
  return out;
}

InfluenceRelation InfluenceRelation::transposed() const {
  InfluenceRelation out(cols, rows);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      if (at(a, b)) out.set(b, a);
    }
  }
  return out;
}

ShadowLabel propagate(const ShadowLabel& label, const InfluenceRelation& relation) {
  if (label.size() != relation.rows) {
    throw ShadowsError(ShadowsErrc::LengthMismatch, "LengthMismatch: label of length " +
                                                        std::to_string(label.size()) + " against relation with " +
                                                        std::to_string(relation.rows) + " rows");
  }
  ShadowLabel out(relation.cols);
  for (std::size_t a = 0; a < relation.rows; ++a) {
    if (label.test(a)) out |= relation.reach[a];
  }
  return out;
}

}  // namespace rpe
