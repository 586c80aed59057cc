#pragma once

#include <json.hpp>

#include "aniso/polyconvexity.hpp"
#include "aniso/qvalued.hpp"
#include "aniso/rational_approx.hpp"

namespace aniso {

using Json = nlohmann::json;

/// KVector: {"n": .., "k": .., "coeffs": [..]} with numbers in float mode and
/// "p/q" strings in rational mode; lexicographic multi-index order.
Json to_json(const KVector& v);
Json to_json(const KVectorQ& v);
KVector kvector_from_json(const Json& j);
KVectorQ kvector_q_from_json(const Json& j);
bool is_rational_kvector(const Json& j);

/// Integrand spec: {"name": .., "params": {..}}.
Json to_json_spec(const GeometricIntegrand& psi);
GeometricIntegrand integrand_from_json(const Json& j);

/// Decomposition: {"eta0": KVector, "atoms": [{"m": .., "eta": KVector}]}.
Json to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const Json& j);

/// Chain file: {"n", "k", "cells": [{"vertices": [[..]], "multiplicity"}]}.
Json to_json(const PolyhedralChain& chain);
PolyhedralChain chain_from_json(const Json& j);

/// Q-function file: {"k","m","Q","level","cells":[{"sheets":[{"a","L"}]}]}.
Json to_json(const QFunction& f);
QFunction qfunction_from_json(const Json& j);

/// Multigraph: {"k","m","Q","groups":[{"count","a","L"}]}.
Json to_json(const AffineMultigraph& h);
AffineMultigraph multigraph_from_json(const Json& j);

Json to_json(const RationalSimpleKVector& v);
Json to_json(const RationalDecomposition& rd);
RationalSimpleKVector rational_simple_from_json(const Json& j);
RationalDecomposition rational_decomposition_from_json(const Json& j);

Json to_json(const UpcReport& report);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace aniso
