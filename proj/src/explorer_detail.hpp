// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "geoncog/explorer.hpp"

namespace geoncog::explorer::detail {

std::size_t catalog_index(const geons::Catalog &catalog, ClassId id);
ClassMask mask_of(const std::vector<ClassId> &classes, const geons::Catalog &catalog);
void fit(Set &s, std::size_t n);
void fit(ObjectBelief &b, std::size_t n);
/// Narrows one geon's variants and records its visible facets.
void absorb(ObjectBelief &b, const perception::Detection &d, const geons::Catalog &catalog);

} // namespace geoncog::explorer::detail
