#include "curvlab/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curvlab/errors.hpp"

namespace curvlab {

using nlohmann::ordered_json;

GraphDescription describe(const MarkovChain& chain) {
  GraphDescription d;
  d.mode = DescriptionMode::kernel;
  d.labels = chain.labels();
  for (int x = 0; x < chain.size(); ++x) {
    if (chain.rate(x, x) > 0.0) {
      EdgeDescription e;
      e.u = e.v = x;
      e.p_uv = e.p_vu = chain.rate(x, x);
      d.edges.push_back(e);
    }
  }
  for (const auto& edge : chain.edges()) {
    EdgeDescription e;
    e.u = edge.x;
    e.v = edge.y;
    e.p_uv = chain.rate(edge.x, edge.y);
    e.p_vu = chain.rate(edge.y, edge.x);
    if (edge.length != 1.0) e.length = edge.length;
    d.edges.push_back(e);
  }
  d.measure = std::vector<double>(chain.measure().data(), chain.measure().data() + chain.size());
  return d;
}

std::string to_json(const GraphSpec& spec) {
  const GraphDescription& d = spec.description;
  ordered_json j;
  j["mode"] = d.mode == DescriptionMode::kernel ? "kernel" : "weights";
  j["vertices"] = d.labels;
  ordered_json edges = ordered_json::array();
  for (const auto& e : d.edges) {
    ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    if (d.mode == DescriptionMode::weights) {
      je["w"] = e.w;
    } else {
      je["p_uv"] = e.p_uv;
      je["p_vu"] = e.p_vu;
    }
    if (e.length) je["len"] = *e.length;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  if (d.measure) j["measure"] = *d.measure;
  if (!spec.provenance.family.empty()) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : spec.provenance.params) params[k] = v;
    j["provenance"] = {{"family", spec.provenance.family}, {"params", params}, {"seed", spec.provenance.seed}};
  }
  return j.dump(2) + "\n";
}

namespace {

int endpoint(const ordered_json& v, const std::vector<std::string>& labels) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == s) return static_cast<int>(i);
    }
    throw InvalidChain("unknown vertex label '" + s + "'");
  }
  throw InvalidChain("edge endpoints must be indices or labels");
}

}  // namespace

GraphSpec spec_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InvalidChain(std::string("malformed graph description: ") + e.what());
  }
  GraphSpec spec;
  GraphDescription& d = spec.description;
  try {
    const std::string mode = j.value("mode", std::string("weights"));
    if (mode == "kernel") {
      d.mode = DescriptionMode::kernel;
    } else if (mode == "weights") {
      d.mode = DescriptionMode::weights;
    } else {
      throw InvalidChain("mode must be 'kernel' or 'weights'");
    }
    const auto& vs = j.at("vertices");
    if (vs.is_number_integer()) {
      for (int i = 0; i < vs.get<int>(); ++i) d.labels.push_back(std::to_string(i));
    } else {
      for (const auto& v : vs) d.labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    for (const auto& je : j.at("edges")) {
      EdgeDescription e;
      e.u = endpoint(je.at("u"), d.labels);
      e.v = endpoint(je.at("v"), d.labels);
      if (d.mode == DescriptionMode::weights) {
        e.w = je.at("w").get<double>();
      } else {
        e.p_uv = je.at("p_uv").get<double>();
        e.p_vu = je.value("p_vu", e.u == e.v ? e.p_uv : 0.0);
      }
      if (je.contains("len")) e.length = je.at("len").get<double>();
      d.edges.push_back(e);
    }
    if (j.contains("measure")) d.measure = j.at("measure").get<std::vector<double>>();
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      spec.provenance.family = p.value("family", std::string());
      spec.provenance.seed = p.value("seed", std::uint64_t{0});
      if (p.contains("params")) {
        for (const auto& [k, v] : p.at("params").items()) {
          spec.provenance.params.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
    }
  } catch (const ordered_json::exception& e) {
    throw InvalidChain(std::string("malformed graph description: ") + e.what());
  }
  return spec;
}

GraphSpec read_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(ss.str());
}

void write_spec(const GraphSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << to_json(spec);
  if (!out) throw PreconditionError("write failed for " + path);
}

}  // namespace curvlab
