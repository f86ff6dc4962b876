// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace geoncog::geons {

enum class ErrorKind
{
  InvalidGeon,
  UnknownClass,
  SchemeTooLarge,
  ParseError,
  StoreIO,
};

const char *to_string(ErrorKind kind);

class GeonError : public std::runtime_error
{
 public:
  GeonError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

using ClassId = std::uint16_t;
using ObjectId = std::uint32_t;
using InstanceId = std::uint32_t;

// Axis convention: z up; right = +x, left = -x, back = +y, front = -y.
enum class Facet : std::uint8_t
{
  Top,
  Bottom,
  Front,
  Back,
  Left,
  Right,
};

inline constexpr std::array<Facet, 6> kFacets = {
    Facet::Top, Facet::Bottom, Facet::Front, Facet::Back, Facet::Left, Facet::Right};

const char *to_string(Facet f);
Facet facet_from_string(const std::string &s);
/// Outward unit normal.
Eigen::Vector3d normal(Facet f);

enum class Base : std::uint8_t
{
  Brick,
  Cylinder,
};
enum class Line : std::uint8_t
{
  Long,
  Short,
};
enum class Deformation : std::uint8_t
{
  None,
  Bloat,
  Depressed,
};

struct FacetAttrs
{
  Facet facet;
  Line line;
  Deformation deformed;
  bool curved;

  friend bool operator==(const FacetAttrs &, const FacetAttrs &) = default;
};

struct GeonClass
{
  ClassId id;
  Base base;
  std::array<FacetAttrs, 6> facets; // in kFacets order

  /// Line attribute of the side facets.
  Line axis_line() const { return facets[static_cast<int>(Facet::Front)].line; }

  friend bool operator==(const GeonClass &, const GeonClass &) = default;
};

inline constexpr std::size_t kMaxCatalogSize = 36;

using Catalog = std::vector<GeonClass>;

/// Base × axis line × {none, bloat} × curved side facets, ids 1..16, base
/// varying slowest.
Catalog default_catalog();
const GeonClass &find_class(const Catalog &catalog, ClassId id);
/// Checks ids are unique, the size bound, and per-facet order.
void validate_catalog(const Catalog &catalog);
Catalog catalog_from_json(const nlohmann::json &doc);
nlohmann::json catalog_to_json(const Catalog &catalog);

/// Class id in the default catalog for an attribute combination. Only
/// Deformation::None and Deformation::Bloat occur in the default grid.
constexpr ClassId default_class_id(Base base, Line axis, Deformation deformed, bool curved)
{
  return static_cast<ClassId>(1 + 8 * static_cast<int>(base) + 4 * static_cast<int>(axis)
      + 2 * (deformed == Deformation::None ? 0 : 1) + (curved ? 1 : 0));
}

// Roles used by the object generators.
inline constexpr ClassId kTrunkClass = default_class_id(Base::Cylinder, Line::Long, Deformation::None, true);
// Tapered brick: the catalog's stand-in for the four-sided pyramid.
inline constexpr ClassId kWedgeClass = default_class_id(Base::Brick, Line::Long, Deformation::Bloat, false);
inline constexpr ClassId kBrickClass = default_class_id(Base::Brick, Line::Short, Deformation::None, false);

inline constexpr double kMinScale = 0.5;
inline constexpr double kMaxScale = 2.0;

struct GeonInstance
{
  InstanceId instance_id = 0;
  ClassId class_id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();
  double noise = 0.0;
  ObjectId parent_object = 0;

  friend bool operator==(const GeonInstance &, const GeonInstance &) = default;
};

/// Throws InvalidGeon when scale or noise leave their ranges.
void validate(const GeonInstance &g);

/// Unit geons span [-0.5, 0.5] per axis before scaling; noise is ignored.
Eigen::AlignedBox3d bounding_box(const GeonInstance &g);

using ZoneSet = std::uint8_t; // bit per Facet; 0 = Empty

inline constexpr ZoneSet zone(Facet f) { return static_cast<ZoneSet>(1u << static_cast<int>(f)); }
std::vector<Facet> zone_facets(ZoneSet z);

class IncidenceMatrix
{
 public:
  IncidenceMatrix() = default;
  explicit IncidenceMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  ZoneSet at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, ZoneSet z) { cells_[i * n_ + j] = z; }
  bool intersects(std::size_t i, std::size_t j) const { return at(i, j) != 0; }

  friend bool operator==(const IncidenceMatrix &, const IncidenceMatrix &) = default;

 private:
  std::size_t n_ = 0;
  std::vector<ZoneSet> cells_;
};

inline constexpr double kDefaultOverlapEpsilon = 0.05;

/// M(i,j) holds the facets of geon j touched by geon i; Empty when the boxes
/// are apart by more than `overlap_epsilon`.
IncidenceMatrix incidence_matrix(const std::vector<GeonInstance> &geons,
    double overlap_epsilon = kDefaultOverlapEpsilon);

struct SchemeGeon
{
  ClassId class_id;
  ObjectId object;
  InstanceId instance;

  friend bool operator==(const SchemeGeon &, const SchemeGeon &) = default;
};

struct Viewpoint
{
  double x = 0.0;
  double y = 0.0;
  int heading = 0;
};

struct GeonScheme
{
  std::vector<SchemeGeon> geons;
  IncidenceMatrix incidence;
  Viewpoint viewpoint;
};

/// Scheme of the given geons, incidence from their boxes.
GeonScheme make_scheme(const std::vector<GeonInstance> &geons, std::vector<ClassId> observed_classes,
    Viewpoint viewpoint = {}, double overlap_epsilon = kDefaultOverlapEpsilon);

inline constexpr std::size_t kMaxCanonicalGeons = 12;

/// Stable text encoding of a scheme up to class-preserving relabeling:
///
///   "<n>|<c_0>,<c_1>,...|<m_00><m_01>...<m_nn>"
///
/// Classes ascend; each matrix cell is two lowercase hex digits (the ZoneSet
/// bitmask, bit k = k-th facet of top,bottom,front,back,left,right), row-major.
/// The labeling minimizes, over permutations within equal-class runs, the
/// sequence that lists for k = 0..n-1 the pairs (M(k,j), M(j,k)) for j < k.
std::string scheme_canonical_form(const GeonScheme &s);

/// Classes and matrix recovered from a canonical encoding (identity labels).
GeonScheme parse_canonical(const std::string &encoding);

bool scheme_match(const GeonScheme &a, const GeonScheme &b);

/// Descriptor of a geon instance within its object, e.g. "o3/g12".
std::string geon_descriptor(ObjectId object, InstanceId instance);

enum class InsertResult
{
  Added,
  Duplicate,
};

struct SchemaRecord
{
  std::set<std::string> schemes;          // canonical encodings
  std::set<std::string> cumulative_geons; // geon descriptors
};

/// Object-schema database held in memory and persisted as one JSON file.
///
/// File layout (sorted keys, two-space indent):
///   {"version": 1, "objects": {"<type id>": {"schemes": [...], "cumulative_geons": [...]}}}
class SchemaStore
{
 public:
  SchemaStore() = default;

  /// Missing file → empty store.
  static SchemaStore open(const std::filesystem::path &path);
  /// Writes to a temporary sibling then renames over `path`.
  void save(const std::filesystem::path &path) const;

  std::string serialize() const;
  static SchemaStore deserialize(const std::string &text);

  InsertResult insert(const std::string &object_type, const GeonScheme &scheme);
  InsertResult insert_encoding(const std::string &object_type, const std::string &encoding,
      const std::vector<std::string> &geon_descriptors);
  std::vector<std::string> lookup(const GeonScheme &scheme) const;
  std::vector<std::string> lookup_encoding(const std::string &encoding) const;

  /// Adds every record of `delta`; a delta type sharing a scheme with an
  /// existing type joins it, otherwise it gets the next "type-N" id.
  /// Returns the delta → stored type mapping.
  std::map<std::string, std::string> merge(const SchemaStore &delta);

  const std::map<std::string, SchemaRecord> &records() const { return records_; }
  bool empty() const { return records_.empty(); }

 private:
  std::map<std::string, SchemaRecord> records_;
};

InsertResult db_insert(SchemaStore &db, const std::string &object_key, const GeonScheme &scheme);
std::vector<std::string> db_lookup(const SchemaStore &db, const GeonScheme &scheme);

} // namespace geoncog::geons
