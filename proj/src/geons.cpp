// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/geons.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace geoncog::geons {

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::InvalidGeon:
    return "InvalidGeon";
  case ErrorKind::UnknownClass:
    return "UnknownClass";
  case ErrorKind::SchemeTooLarge:
    return "SchemeTooLarge";
  case ErrorKind::ParseError:
    return "ParseError";
  case ErrorKind::StoreIO:
    return "StoreIO";
  }
  return "Unknown";
}

const char *to_string(Facet f)
{
  switch (f) {
  case Facet::Top:
    return "top";
  case Facet::Bottom:
    return "bottom";
  case Facet::Front:
    return "front";
  case Facet::Back:
    return "back";
  case Facet::Left:
    return "left";
  case Facet::Right:
    return "right";
  }
  return "?";
}

Facet facet_from_string(const std::string &s)
{
  for (auto f : kFacets)
    if (s == to_string(f))
      return f;
  throw GeonError(ErrorKind::ParseError, "unknown facet '" + s + "'");
}

Eigen::Vector3d normal(Facet f)
{
  switch (f) {
  case Facet::Top:
    return Eigen::Vector3d::UnitZ();
  case Facet::Bottom:
    return -Eigen::Vector3d::UnitZ();
  case Facet::Front:
    return -Eigen::Vector3d::UnitY();
  case Facet::Back:
    return Eigen::Vector3d::UnitY();
  case Facet::Left:
    return -Eigen::Vector3d::UnitX();
  case Facet::Right:
    return Eigen::Vector3d::UnitX();
  }
  return Eigen::Vector3d::Zero();
}

// Catalog /////////////////////////////////////////////////////////////////////

Catalog default_catalog()
{
  Catalog out;
  for (auto base : {Base::Brick, Base::Cylinder})
    for (auto axis : {Line::Long, Line::Short})
      for (auto deformed : {Deformation::None, Deformation::Bloat})
        for (bool curved : {false, true}) {
          GeonClass c{default_class_id(base, axis, deformed, curved), base, {}};
          for (std::size_t k = 0; k < kFacets.size(); ++k) {
            bool cap = kFacets[k] == Facet::Top || kFacets[k] == Facet::Bottom;
            c.facets[k] = cap ? FacetAttrs{kFacets[k], Line::Short, Deformation::None, false}
                              : FacetAttrs{kFacets[k], axis, deformed, curved};
          }
          out.push_back(c);
        }
  return out;
}

const GeonClass &find_class(const Catalog &catalog, ClassId id)
{
  auto it = std::find_if(catalog.begin(), catalog.end(), [&](const GeonClass &c) { return c.id == id; });
  if (it == catalog.end())
    throw GeonError(ErrorKind::UnknownClass, "class " + std::to_string(id) + " not in catalog");
  return *it;
}

void validate_catalog(const Catalog &catalog)
{
  if (catalog.empty() || catalog.size() > kMaxCatalogSize)
    throw GeonError(ErrorKind::InvalidGeon, "catalog size must be within 1..36");
  std::vector<ClassId> ids;
  for (const auto &c : catalog) {
    ids.push_back(c.id);
    for (std::size_t k = 0; k < kFacets.size(); ++k)
      if (c.facets[k].facet != kFacets[k])
        throw GeonError(ErrorKind::InvalidGeon, "class " + std::to_string(c.id) + " facets out of order");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw GeonError(ErrorKind::InvalidGeon, "duplicate class id");
}

namespace {

template <typename E>
E parse_enum(const nlohmann::json &v, std::initializer_list<std::pair<const char *, E>> table)
{
  auto s = v.get<std::string>();
  for (const auto &[name, value] : table)
    if (s == name)
      return value;
  throw GeonError(ErrorKind::ParseError, "unexpected value '" + s + "'");
}

const char *line_name(Line l) { return l == Line::Long ? "long" : "short"; }
const char *deformation_name(Deformation d)
{
  return d == Deformation::None ? "no" : d == Deformation::Bloat ? "bloat" : "depressed";
}

} // namespace

Catalog catalog_from_json(const nlohmann::json &doc)
{
  try {
    Catalog out;
    for (const auto &entry : doc.at("classes")) {
      GeonClass c{};
      c.id = entry.at("id").get<ClassId>();
      c.base = parse_enum<Base>(entry.at("base"), {{"brick", Base::Brick}, {"cylinder", Base::Cylinder}});
      const auto &facets = entry.at("facets");
      if (facets.size() != 6)
        throw GeonError(ErrorKind::ParseError, "class needs exactly 6 facet records");
      for (std::size_t k = 0; k < 6; ++k) {
        const auto &f = facets[k];
        c.facets[k] = FacetAttrs{facet_from_string(f.at("facet").get<std::string>()),
            parse_enum<Line>(f.at("line"), {{"long", Line::Long}, {"short", Line::Short}}),
            parse_enum<Deformation>(f.at("deformed"),
                {{"no", Deformation::None}, {"bloat", Deformation::Bloat}, {"depressed", Deformation::Depressed}}),
            parse_enum<bool>(f.at("curved"), {{"yes", true}, {"no", false}})};
      }
      out.push_back(c);
    }
    validate_catalog(out);
    return out;
  } catch (const nlohmann::json::exception &e) {
    throw GeonError(ErrorKind::ParseError, e.what());
  }
}

nlohmann::json catalog_to_json(const Catalog &catalog)
{
  nlohmann::json classes = nlohmann::json::array();
  for (const auto &c : catalog) {
    nlohmann::json facets = nlohmann::json::array();
    for (const auto &f : c.facets)
      facets.push_back({{"facet", to_string(f.facet)}, {"line", line_name(f.line)},
          {"deformed", deformation_name(f.deformed)}, {"curved", f.curved ? "yes" : "no"}});
    classes.push_back({{"id", c.id}, {"base", c.base == Base::Brick ? "brick" : "cylinder"}, {"facets", facets}});
  }
  return {{"classes", classes}};
}

// Geometry ////////////////////////////////////////////////////////////////////

void validate(const GeonInstance &g)
{
  for (int k = 0; k < 3; ++k)
    if (!(g.scale[k] >= kMinScale && g.scale[k] <= kMaxScale))
      throw GeonError(ErrorKind::InvalidGeon,
          "geon " + std::to_string(g.instance_id) + " scale outside [0.5, 2]");
  if (!(g.noise >= 0.0 && g.noise <= 1.0))
    throw GeonError(ErrorKind::InvalidGeon, "geon " + std::to_string(g.instance_id) + " noise outside [0, 1]");
}

Eigen::AlignedBox3d bounding_box(const GeonInstance &g)
{
  Eigen::Vector3d half = 0.5 * g.scale;
  return Eigen::AlignedBox3d(g.position - half, g.position + half);
}

std::vector<Facet> zone_facets(ZoneSet z)
{
  std::vector<Facet> out;
  for (auto f : kFacets)
    if (z & zone(f))
      out.push_back(f);
  return out;
}

namespace {

// Facets of `box` nearest to `point`, ties within eps.
ZoneSet nearest_facets(const Eigen::AlignedBox3d &box, const Eigen::Vector3d &point, double eps)
{
  std::array<double, 6> dist{};
  for (std::size_t k = 0; k < kFacets.size(); ++k) {
    auto f = kFacets[k];
    Eigen::Vector3d n = normal(f);
    int axis = n.x() != 0 ? 0 : n.y() != 0 ? 1 : 2;
    double plane = n[axis] > 0 ? box.max()[axis] : box.min()[axis];
    dist[k] = std::abs(point[axis] - plane);
  }
  double best = *std::min_element(dist.begin(), dist.end());
  ZoneSet z = 0;
  for (std::size_t k = 0; k < kFacets.size(); ++k)
    if (dist[k] <= best + eps)
      z |= zone(kFacets[k]);
  return z;
}

} // namespace

IncidenceMatrix incidence_matrix(const std::vector<GeonInstance> &geons, double overlap_epsilon)
{
  const auto n = geons.size();
  IncidenceMatrix m(n);
  std::vector<Eigen::AlignedBox3d> boxes;
  boxes.reserve(n);
  for (const auto &g : geons)
    boxes.push_back(bounding_box(g));

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto &a = boxes[i];
      const auto &b = boxes[j];
      Eigen::Vector3d gap = (b.min() - a.max()).cwiseMax(a.min() - b.max());
      if (gap.maxCoeff() > overlap_epsilon)
        continue;
      Eigen::Vector3d center = 0.5 * (a.min().cwiseMax(b.min()) + a.max().cwiseMin(b.max()));
      m.set(i, j, nearest_facets(b, center, overlap_epsilon));
      m.set(j, i, nearest_facets(a, center, overlap_epsilon));
    }
  }
  return m;
}

// Schemes /////////////////////////////////////////////////////////////////////

GeonScheme make_scheme(const std::vector<GeonInstance> &geons, std::vector<ClassId> observed_classes,
    Viewpoint viewpoint, double overlap_epsilon)
{
  if (observed_classes.size() != geons.size())
    throw GeonError(ErrorKind::InvalidGeon, "one observed class per geon required");
  GeonScheme s;
  s.incidence = incidence_matrix(geons, overlap_epsilon);
  s.viewpoint = viewpoint;
  for (std::size_t i = 0; i < geons.size(); ++i)
    s.geons.push_back({observed_classes[i], geons[i].parent_object, geons[i].instance_id});
  return s;
}

namespace {

class Canonicalizer
{
 public:
  explicit Canonicalizer(const GeonScheme &s) : s_(s), n_(s.geons.size())
  {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
        [&](std::size_t a, std::size_t b) { return s_.geons[a].class_id < s_.geons[b].class_id; });
    swappable_.assign(n_ * n_, 0);
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v)
        swappable_[u * n_ + v] = swappable_[v * n_ + u] = transposition_fixes(u, v);
  }

  std::vector<std::size_t> run()
  {
    std::vector<std::size_t> perm;
    std::vector<std::uint8_t> used(n_, 0);
    std::vector<std::uint16_t> key;
    search(perm, used, key, false);
    return best_perm_;
  }

 private:
  ZoneSet at(std::size_t i, std::size_t j) const { return s_.incidence.at(i, j); }

  bool transposition_fixes(std::size_t u, std::size_t v) const
  {
    if (s_.geons[u].class_id != s_.geons[v].class_id || at(u, v) != at(v, u))
      return false;
    for (std::size_t w = 0; w < n_; ++w) {
      if (w == u || w == v)
        continue;
      if (at(u, w) != at(v, w) || at(w, u) != at(w, v))
        return false;
    }
    return true;
  }

  // `less` = the key prefix is already strictly below the best key.
  void search(std::vector<std::size_t> &perm, std::vector<std::uint8_t> &used, std::vector<std::uint16_t> &key,
      bool less)
  {
    const auto k = perm.size();
    if (k == n_) {
      if (less || best_perm_.empty()) {
        best_key_ = key;
        best_perm_ = perm;
        ++improvements_;
      }
      return;
    }
    const auto cls = s_.geons[order_[k]].class_id;
    std::vector<std::size_t> tried;
    for (std::size_t c = 0; c < n_; ++c) {
      if (used[c] || s_.geons[c].class_id != cls)
        continue;
      if (std::any_of(tried.begin(), tried.end(), [&](std::size_t u) { return swappable_[u * n_ + c]; }))
        continue;
      tried.push_back(c);

      const auto mark = key.size();
      for (std::size_t j = 0; j < k; ++j)
        key.push_back(static_cast<std::uint16_t>((at(c, perm[j]) << 8) | at(perm[j], c)));

      bool child_less = less || best_perm_.empty();
      bool prune = false;
      if (!child_less) {
        auto cmp = std::lexicographical_compare_three_way(key.begin() + static_cast<std::ptrdiff_t>(mark), key.end(),
            best_key_.begin() + static_cast<std::ptrdiff_t>(mark),
            best_key_.begin() + static_cast<std::ptrdiff_t>(key.size()));
        if (cmp > 0)
          prune = true;
        else if (cmp < 0)
          child_less = true;
      }
      if (!prune) {
        const auto before = improvements_;
        perm.push_back(c);
        used[c] = 1;
        search(perm, used, key, child_less);
        used[c] = 0;
        perm.pop_back();
        // The new best shares this prefix, so siblings compare against it.
        if (improvements_ != before)
          less = false;
      }
      key.resize(mark);
    }
  }

  const GeonScheme &s_;
  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<std::uint8_t> swappable_;
  std::vector<std::uint16_t> best_key_;
  std::vector<std::size_t> best_perm_;
  std::size_t improvements_ = 0;
};

} // namespace

std::string scheme_canonical_form(const GeonScheme &s)
{
  const auto n = s.geons.size();
  if (n > kMaxCanonicalGeons)
    throw GeonError(ErrorKind::SchemeTooLarge,
        "scheme has " + std::to_string(n) + " geons; canonical form supports at most 12");
  if (s.incidence.size() != n)
    throw GeonError(ErrorKind::InvalidGeon, "incidence matrix does not match the geon list");

  auto perm = Canonicalizer(s).run();

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = std::to_string(n) + "|";
  for (std::size_t k = 0; k < n; ++k) {
    if (k)
      out += ',';
    out += std::to_string(s.geons[perm[k]].class_id);
  }
  out += '|';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto z = s.incidence.at(perm[i], perm[j]);
      out += kHex[z >> 4];
      out += kHex[z & 0xf];
    }
  return out;
}

GeonScheme parse_canonical(const std::string &encoding)
{
  auto bar1 = encoding.find('|');
  auto bar2 = bar1 == std::string::npos ? std::string::npos : encoding.find('|', bar1 + 1);
  if (bar2 == std::string::npos)
    throw GeonError(ErrorKind::ParseError, "malformed scheme encoding");
  std::size_t n = 0;
  try {
    n = std::stoul(encoding.substr(0, bar1));
  } catch (const std::exception &) {
    throw GeonError(ErrorKind::ParseError, "malformed scheme size");
  }
  GeonScheme s;
  std::istringstream classes(encoding.substr(bar1 + 1, bar2 - bar1 - 1));
  std::string item;
  while (std::getline(classes, item, ','))
    s.geons.push_back({static_cast<ClassId>(std::stoul(item)), 0, static_cast<InstanceId>(s.geons.size())});
  auto cells = encoding.substr(bar2 + 1);
  if (s.geons.size() != n || cells.size() != 2 * n * n)
    throw GeonError(ErrorKind::ParseError, "scheme encoding size mismatch");
  s.incidence = IncidenceMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s.incidence.set(i, j, static_cast<ZoneSet>(std::stoul(cells.substr(2 * (i * n + j), 2), nullptr, 16)));
  return s;
}

bool scheme_match(const GeonScheme &a, const GeonScheme &b)
{
  if (a.geons.size() != b.geons.size())
    return false;
  return scheme_canonical_form(a) == scheme_canonical_form(b);
}

std::string geon_descriptor(ObjectId object, InstanceId instance)
{
  return "o" + std::to_string(object) + "/g" + std::to_string(instance);
}

} // namespace geoncog::geons
