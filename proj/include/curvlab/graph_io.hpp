#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/chain.hpp"

namespace curvlab {

/// Where a description came from. Parameters are kept as printed strings so
/// that they survive serialisation unchanged.
struct Provenance {
  std::string family;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
};

struct GraphSpec {
  GraphDescription description;
  Provenance provenance;
};

/// Kernel-mode description of an existing chain (rates, holding rates, lengths, measure).
GraphDescription describe(const MarkovChain& chain);

/// JSON text of a spec:
///   {"mode": "kernel"|"weights", "vertices": [...], "edges": [{"u","v","w"|"p_uv","p_vu","len"?}],
///    "measure"?: [...], "provenance"?: {"family", "params", "seed"}}
/// Edge endpoints are vertex indices; labels are accepted on input.
std::string to_json(const GraphSpec& spec);
GraphSpec spec_from_json(const std::string& text);

GraphSpec read_spec(const std::string& path);
void write_spec(const GraphSpec& spec, const std::string& path);

}  // namespace curvlab
