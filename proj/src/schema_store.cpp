// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "geoncog/geons.hpp"

namespace geoncog::geons {

namespace fs = std::filesystem;

SchemaStore SchemaStore::open(const fs::path &path)
{
  std::error_code ec;
  if (!fs::exists(path, ec))
    return {};
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw GeonError(ErrorKind::StoreIO, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void SchemaStore::save(const fs::path &path) const
{
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw GeonError(ErrorKind::StoreIO, "cannot write " + tmp.string());
    out << serialize();
    if (!out.flush())
      throw GeonError(ErrorKind::StoreIO, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw GeonError(ErrorKind::StoreIO, "cannot replace " + path.string() + ": " + ec.message());
}

std::string SchemaStore::serialize() const
{
  nlohmann::json objects = nlohmann::json::object();
  for (const auto &[type, rec] : records_)
    objects[type] = {{"schemes", rec.schemes}, {"cumulative_geons", rec.cumulative_geons}};
  nlohmann::json doc = {{"version", 1}, {"objects", objects}};
  return doc.dump(2) + "\n";
}

SchemaStore SchemaStore::deserialize(const std::string &text)
{
  SchemaStore store;
  try {
    auto doc = nlohmann::json::parse(text);
    if (doc.at("version").get<int>() != 1)
      throw GeonError(ErrorKind::ParseError, "unsupported store version");
    for (const auto &[type, rec] : doc.at("objects").items()) {
      auto &r = store.records_[type];
      for (const auto &enc : rec.at("schemes")) {
        auto s = enc.get<std::string>();
        parse_canonical(s); // validates
        r.schemes.insert(s);
      }
      for (const auto &g : rec.at("cumulative_geons"))
        r.cumulative_geons.insert(g.get<std::string>());
    }
  } catch (const nlohmann::json::exception &e) {
    throw GeonError(ErrorKind::ParseError, std::string("schema store: ") + e.what());
  }
  return store;
}

InsertResult SchemaStore::insert(const std::string &object_type, const GeonScheme &scheme)
{
  std::vector<std::string> descriptors;
  for (const auto &g : scheme.geons)
    descriptors.push_back(geon_descriptor(g.object, g.instance));
  return insert_encoding(object_type, scheme_canonical_form(scheme), descriptors);
}

InsertResult SchemaStore::insert_encoding(const std::string &object_type, const std::string &encoding,
    const std::vector<std::string> &geon_descriptors)
{
  auto &rec = records_[object_type];
  rec.cumulative_geons.insert(geon_descriptors.begin(), geon_descriptors.end());
  return rec.schemes.insert(encoding).second ? InsertResult::Added : InsertResult::Duplicate;
}

std::vector<std::string> SchemaStore::lookup(const GeonScheme &scheme) const
{
  return lookup_encoding(scheme_canonical_form(scheme));
}

std::vector<std::string> SchemaStore::lookup_encoding(const std::string &encoding) const
{
  std::vector<std::string> out;
  for (const auto &[type, rec] : records_)
    if (rec.schemes.contains(encoding))
      out.push_back(type);
  return out;
}

std::map<std::string, std::string> SchemaStore::merge(const SchemaStore &delta)
{
  std::map<std::string, std::string> mapping;
  for (const auto &[type, rec] : delta.records_) {
    std::string target;
    for (const auto &enc : rec.schemes) {
      auto owners = lookup_encoding(enc);
      if (!owners.empty() && (target.empty() || owners.front() < target))
        target = owners.front();
    }
    if (target.empty()) {
      for (std::size_t n = records_.size() + 1;; ++n) {
        target = "type-" + std::to_string(n);
        if (!records_.contains(target))
          break;
      }
    }
    auto &dst = records_[target];
    dst.schemes.insert(rec.schemes.begin(), rec.schemes.end());
    dst.cumulative_geons.insert(rec.cumulative_geons.begin(), rec.cumulative_geons.end());
    mapping[type] = target;
  }
  return mapping;
}

InsertResult db_insert(SchemaStore &db, const std::string &object_key, const GeonScheme &scheme)
{
  return db.insert(object_key, scheme);
}

std::vector<std::string> db_lookup(const SchemaStore &db, const GeonScheme &scheme)
{
  return db.lookup(scheme);
}

} // namespace geoncog::geons
