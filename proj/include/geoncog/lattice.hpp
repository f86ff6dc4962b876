// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace geoncog::lattice {

enum class ErrorKind
{
  InvalidInput,
  NotAntisymmetric,
  NotALattice,
  NoBounds,
  MixedLattices,
  NotBrouwer,
  NoMaximum,
  UniverseTooLarge,
  ParseError,
};

const char *to_string(ErrorKind kind);

class LatticeError : public std::runtime_error
{
 public:
  LatticeError(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Handle to an element of one FiniteLattice. Elements of different lattice
// instances never compare through lattice operations (MixedLattices).
class Element
{
 public:
  Element() = default;

  std::uint32_t id() const { return id_; }
  std::uint64_t owner() const { return owner_; }

  friend bool operator==(const Element &, const Element &) = default;

 private:
  friend class FiniteLattice;
  Element(std::uint64_t owner, std::uint32_t id) : owner_(owner), id_(id) {}

  std::uint64_t owner_ = 0;
  std::uint32_t id_ = 0;
};

inline constexpr std::size_t kDefaultPowersetCap = 20;
inline constexpr std::size_t kPowersetCeiling = 20;

/// Explicit finite bounded lattice.
///
/// Two representations share one interface: ordinary lattices keep their
/// order, join and meet as dense tables; powerset lattices encode each element
/// as a bitmask over the sorted universe and answer every query with bit
/// operations. Copies are cheap to reason about: the object is immutable after
/// construction and copies share the owner token, so their elements mix freely.
class FiniteLattice
{
 public:
  /// Builds the lattice generated by `order` (lesser, greater) pairs. Element
  /// identifiers are sorted; ids index the sorted list.
  static FiniteLattice from_order(std::vector<std::string> elements,
      const std::vector<std::pair<std::string, std::string>> &order);

  /// Boolean lattice of subsets of `universe`, ordered by inclusion.
  static FiniteLattice powerset(std::vector<std::string> universe,
      std::size_t cap = kDefaultPowersetCap);

  /// `{"elements": [...], "order": [[lesser, greater], ...]}`
  static FiniteLattice from_json(const nlohmann::json &doc);
  static FiniteLattice load(const std::filesystem::path &path);

  std::size_t size() const { return size_; }
  std::uint64_t uid() const { return uid_; }
  bool is_boolean() const { return boolean_; }

  Element element(std::uint32_t id) const;
  Element element(std::string_view name) const;
  std::vector<Element> elements() const;
  std::string name(Element e) const;

  Element bottom() const { return Element(uid_, bottom_); }
  Element top() const { return Element(uid_, top_); }

  bool leq(Element a, Element b) const;
  Element join(Element a, Element b) const;
  Element meet(Element a, Element b) const;

  /// Exhaustive x∧(y∨z) = (x∧y)∨(x∧z) check, computed once at construction.
  bool is_distributive() const { return distributive_; }

  /// Largest c with a ∧ c ≤ b. Requires a distributive lattice.
  Element implication(Element a, Element b) const;
  Element pseudo_complement(Element a) const { return implication(a, bottom()); }

  /// Universe of a powerset lattice (sorted); empty otherwise.
  const std::vector<std::string> &universe() const { return universe_; }

 private:
  FiniteLattice() = default;

  void check(Element e) const;
  std::size_t at(std::uint32_t a, std::uint32_t b) const { return std::size_t(a) * size_ + b; }
  bool compute_distributive() const;

  std::uint64_t uid_ = 0;
  std::size_t size_ = 0;
  bool boolean_ = false;
  bool distributive_ = false;
  std::uint32_t bottom_ = 0;
  std::uint32_t top_ = 0;

  // Table representation.
  std::vector<std::string> names_;
  std::vector<std::uint8_t> leq_;
  std::vector<std::uint32_t> join_;
  std::vector<std::uint32_t> meet_;

  // Boolean representation.
  std::vector<std::string> universe_;
  std::uint32_t full_mask_ = 0;
};

/// Boolean lattice 2^U over a growable universe, without materialized
/// tables. Used where U is too large for FiniteLattice::powerset.
class BitsetLattice
{
 public:
  using Set = boost::dynamic_bitset<>;

  explicit BitsetLattice(std::size_t universe_size = 0) : size_(universe_size) {}

  std::size_t universe_size() const { return size_; }

  Set bottom() const { return Set(size_); }
  Set top() const { return ~Set(size_); }

  /// Resizes `s` to this universe; new bits are clear.
  Set adopt(Set s) const;

  Set join(const Set &a, const Set &b) const;
  Set meet(const Set &a, const Set &b) const;
  bool leq(const Set &a, const Set &b) const;
  Set pseudo_complement(const Set &a) const;
  Set implication(const Set &a, const Set &b) const;

 private:
  std::size_t size_;
};

/// Canonical text encoding of a bitset: one hex digit per four bits in index
/// order, bit 4k being the high bit of digit k. Equal-length encodings compare
/// lexicographically in the same order as the bit sequences.
std::string encode(const BitsetLattice::Set &s);

} // namespace geoncog::lattice
