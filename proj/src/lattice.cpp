// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>

namespace geoncog::lattice {

namespace {

std::uint64_t next_uid()
{
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

} // namespace

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::InvalidInput:
    return "InvalidInput";
  case ErrorKind::NotAntisymmetric:
    return "NotAntisymmetric";
  case ErrorKind::NotALattice:
    return "NotALattice";
  case ErrorKind::NoBounds:
    return "NoBounds";
  case ErrorKind::MixedLattices:
    return "MixedLattices";
  case ErrorKind::NotBrouwer:
    return "NotBrouwer";
  case ErrorKind::NoMaximum:
    return "NoMaximum";
  case ErrorKind::UniverseTooLarge:
    return "UniverseTooLarge";
  case ErrorKind::ParseError:
    return "ParseError";
  }
  return "Unknown";
}

FiniteLattice FiniteLattice::from_order(std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>> &order)
{
  if (elements.empty())
    throw LatticeError(ErrorKind::InvalidInput, "lattice needs at least one element");
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
    throw LatticeError(ErrorKind::InvalidInput, "duplicate element identifier");

  FiniteLattice lat;
  lat.uid_ = next_uid();
  lat.size_ = elements.size();
  lat.names_ = std::move(elements);
  const auto n = static_cast<std::uint32_t>(lat.size_);

  auto index = [&](const std::string &name) {
    auto it = std::lower_bound(lat.names_.begin(), lat.names_.end(), name);
    if (it == lat.names_.end() || *it != name)
      throw LatticeError(ErrorKind::InvalidInput, "order references undeclared element '" + name + "'");
    return static_cast<std::uint32_t>(it - lat.names_.begin());
  };

  lat.leq_.assign(lat.size_ * lat.size_, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    lat.leq_[lat.at(i, i)] = 1;
  for (const auto &[lesser, greater] : order)
    lat.leq_[lat.at(index(lesser), index(greater))] = 1;

  // Warshall closure.
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i)
      if (lat.leq_[lat.at(i, k)])
        for (std::uint32_t j = 0; j < n; ++j)
          if (lat.leq_[lat.at(k, j)])
            lat.leq_[lat.at(i, j)] = 1;

  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (lat.leq_[lat.at(i, j)] && lat.leq_[lat.at(j, i)])
        throw LatticeError(ErrorKind::NotAntisymmetric,
            "order cycle between '" + lat.names_[i] + "' and '" + lat.names_[j] + "'");

  // Least upper / greatest lower bounds by exhaustive scan.
  auto bound = [&](std::uint32_t a, std::uint32_t b, bool upper) -> std::optional<std::uint32_t> {
    auto below = [&](std::uint32_t x, std::uint32_t y) {
      return upper ? lat.leq_[lat.at(x, y)] != 0 : lat.leq_[lat.at(y, x)] != 0;
    };
    std::vector<std::uint32_t> bounds;
    for (std::uint32_t c = 0; c < n; ++c)
      if (below(a, c) && below(b, c))
        bounds.push_back(c);
    for (auto c : bounds)
      if (std::all_of(bounds.begin(), bounds.end(), [&](std::uint32_t d) { return below(c, d); }))
        return c;
    return std::nullopt;
  };

  lat.join_.assign(lat.size_ * lat.size_, 0);
  lat.meet_.assign(lat.size_ * lat.size_, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a; b < n; ++b) {
      auto j = bound(a, b, true);
      auto m = bound(a, b, false);
      if (!j || !m)
        throw LatticeError(ErrorKind::NotALattice,
            "'" + lat.names_[a] + "' and '" + lat.names_[b] + "' lack a unique " + (j ? "meet" : "join"));
      lat.join_[lat.at(a, b)] = lat.join_[lat.at(b, a)] = *j;
      lat.meet_[lat.at(a, b)] = lat.meet_[lat.at(b, a)] = *m;
    }
  }

  std::optional<std::uint32_t> bottom, top;
  for (std::uint32_t c = 0; c < n; ++c) {
    bool is_bottom = true, is_top = true;
    for (std::uint32_t d = 0; d < n; ++d) {
      is_bottom = is_bottom && lat.leq_[lat.at(c, d)];
      is_top = is_top && lat.leq_[lat.at(d, c)];
    }
    if (is_bottom)
      bottom = c;
    if (is_top)
      top = c;
  }
  if (!bottom || !top)
    throw LatticeError(ErrorKind::NoBounds, "lattice has no global bottom or top");
  lat.bottom_ = *bottom;
  lat.top_ = *top;
  lat.distributive_ = lat.compute_distributive();
  return lat;
}

FiniteLattice FiniteLattice::powerset(std::vector<std::string> universe, std::size_t cap)
{
  std::sort(universe.begin(), universe.end());
  if (std::adjacent_find(universe.begin(), universe.end()) != universe.end())
    throw LatticeError(ErrorKind::InvalidInput, "duplicate universe identifier");
  if (universe.size() > std::min(cap, kPowersetCeiling))
    throw LatticeError(ErrorKind::UniverseTooLarge,
        "powerset universe of " + std::to_string(universe.size()) + " exceeds cap "
            + std::to_string(std::min(cap, kPowersetCeiling)));

  FiniteLattice lat;
  lat.uid_ = next_uid();
  lat.boolean_ = true;
  lat.universe_ = std::move(universe);
  lat.size_ = std::size_t{1} << lat.universe_.size();
  lat.full_mask_ = static_cast<std::uint32_t>(lat.size_ - 1);
  lat.bottom_ = 0;
  lat.top_ = lat.full_mask_;
  lat.distributive_ = true;
  return lat;
}

FiniteLattice FiniteLattice::from_json(const nlohmann::json &doc)
{
  try {
    auto elements = doc.at("elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto &pair : doc.value("order", nlohmann::json::array())) {
      if (!pair.is_array() || pair.size() != 2)
        throw LatticeError(ErrorKind::ParseError, "order entries must be [lesser, greater]");
      order.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return from_order(std::move(elements), order);
  } catch (const nlohmann::json::exception &e) {
    throw LatticeError(ErrorKind::ParseError, e.what());
  }
}

FiniteLattice FiniteLattice::load(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw LatticeError(ErrorKind::ParseError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &e) {
    throw LatticeError(ErrorKind::ParseError, e.what());
  }
  return from_json(doc);
}

Element FiniteLattice::element(std::uint32_t id) const
{
  if (id >= size_)
    throw LatticeError(ErrorKind::InvalidInput, "element id out of range");
  return Element(uid_, id);
}

Element FiniteLattice::element(std::string_view name) const
{
  if (!boolean_) {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name)
      throw LatticeError(ErrorKind::InvalidInput, "unknown element '" + std::string(name) + "'");
    return Element(uid_, static_cast<std::uint32_t>(it - names_.begin()));
  }
  // "{a,b}"
  if (name.size() < 2 || name.front() != '{' || name.back() != '}')
    throw LatticeError(ErrorKind::InvalidInput, "powerset element must be written {a,b,...}");
  std::uint32_t mask = 0;
  auto body = name.substr(1, name.size() - 2);
  while (!body.empty()) {
    auto comma = body.find(',');
    auto item = body.substr(0, comma);
    auto it = std::lower_bound(universe_.begin(), universe_.end(), item);
    if (it == universe_.end() || *it != item)
      throw LatticeError(ErrorKind::InvalidInput, "unknown universe member '" + std::string(item) + "'");
    mask |= 1u << (it - universe_.begin());
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return Element(uid_, mask);
}

std::vector<Element> FiniteLattice::elements() const
{
  std::vector<Element> out;
  out.reserve(size_);
  for (std::uint32_t i = 0; i < size_; ++i)
    out.push_back(Element(uid_, i));
  return out;
}

std::string FiniteLattice::name(Element e) const
{
  check(e);
  if (!boolean_)
    return names_[e.id()];
  std::string out = "{";
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    if (e.id() & (1u << i)) {
      if (out.size() > 1)
        out += ',';
      out += universe_[i];
    }
  }
  return out + "}";
}

void FiniteLattice::check(Element e) const
{
  if (e.owner() != uid_)
    throw LatticeError(ErrorKind::MixedLattices, "element belongs to a different lattice");
  if (e.id() >= size_)
    throw LatticeError(ErrorKind::InvalidInput, "element id out of range");
}

bool FiniteLattice::leq(Element a, Element b) const
{
  check(a);
  check(b);
  if (boolean_)
    return (a.id() & ~b.id()) == 0;
  return leq_[at(a.id(), b.id())] != 0;
}

Element FiniteLattice::join(Element a, Element b) const
{
  check(a);
  check(b);
  if (boolean_)
    return Element(uid_, a.id() | b.id());
  return Element(uid_, join_[at(a.id(), b.id())]);
}

Element FiniteLattice::meet(Element a, Element b) const
{
  check(a);
  check(b);
  if (boolean_)
    return Element(uid_, a.id() & b.id());
  return Element(uid_, meet_[at(a.id(), b.id())]);
}

bool FiniteLattice::compute_distributive() const
{
  const auto n = static_cast<std::uint32_t>(size_);
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      for (std::uint32_t z = 0; z < n; ++z) {
        auto lhs = meet_[at(x, join_[at(y, z)])];
        auto rhs = join_[at(meet_[at(x, y)], meet_[at(x, z)])];
        if (lhs != rhs)
          return false;
      }
  return true;
}

Element FiniteLattice::implication(Element a, Element b) const
{
  check(a);
  check(b);
  if (!distributive_)
    throw LatticeError(ErrorKind::NotBrouwer, "implication needs a distributive (Brouwer) lattice");
  if (boolean_)
    return Element(uid_, (~a.id() | b.id()) & full_mask_);

  const auto n = static_cast<std::uint32_t>(size_);
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t c = 0; c < n; ++c)
    if (leq_[at(meet_[at(a.id(), c)], b.id())])
      candidates.push_back(c);
  for (auto c : candidates)
    if (std::all_of(candidates.begin(), candidates.end(),
            [&](std::uint32_t d) { return leq_[at(d, c)] != 0; }))
      return Element(uid_, c);
  throw LatticeError(ErrorKind::NoMaximum, "no largest c with a ∧ c ≤ b");
}

BitsetLattice::Set BitsetLattice::adopt(Set s) const
{
  s.resize(size_);
  return s;
}

BitsetLattice::Set BitsetLattice::join(const Set &a, const Set &b) const
{
  return adopt(a) | adopt(b);
}

BitsetLattice::Set BitsetLattice::meet(const Set &a, const Set &b) const
{
  return adopt(a) & adopt(b);
}

bool BitsetLattice::leq(const Set &a, const Set &b) const
{
  return adopt(a).is_subset_of(adopt(b));
}

BitsetLattice::Set BitsetLattice::pseudo_complement(const Set &a) const
{
  return ~adopt(a);
}

BitsetLattice::Set BitsetLattice::implication(const Set &a, const Set &b) const
{
  return ~adopt(a) | adopt(b);
}

std::string encode(const BitsetLattice::Set &s)
{
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve((s.size() + 3) / 4);
  for (std::size_t base = 0; base < s.size(); base += 4) {
    unsigned digit = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      digit <<= 1;
      if (base + k < s.size() && s.test(base + k))
        digit |= 1;
    }
    out += kHex[digit];
  }
  return out;
}

} // namespace geoncog::lattice
