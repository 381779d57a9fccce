#include "ctree/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ctree/error.hpp"
#include "json.hpp"

namespace ctree {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::vector<double>> parse_row(const std::string& line) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    row.push_back(v);
  }
  if (!line.empty() && line.back() == ',') return std::nullopt;
  return row;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "null" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double get_radius(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  return v.get<double>();
}

void write_provenance(std::ostream& os, const Provenance& pv, const std::string& extra) {
  os << "  \"provenance\": {";
  std::string sep;
  if (pv.c_delta) {
    os << sep << "\"C_delta\": " << num(*pv.c_delta);
    sep = ", ";
  }
  if (pv.delta) {
    os << sep << "\"delta\": " << num(*pv.delta);
    sep = ", ";
  }
  if (pv.eps_tilde) {
    os << sep << "\"eps_tilde\": " << num(*pv.eps_tilde);
    sep = ", ";
  }
  if (pv.seed) {
    os << sep << "\"seed\": " << *pv.seed;
    sep = ", ";
  }
  if (!extra.empty()) os << sep << extra;
  os << "}\n";
}

std::string tree_json(const ClusterTree& tree, const std::string& extra) {
  std::ostringstream os;
  const TreeMeta& m = tree.meta();
  os << "{\n";
  os << "  \"version\": \"" << kTreeSchemaVersion << "\",\n";
  os << "  \"n\": " << tree.size() << ",\n";
  os << "  \"d\": " << m.d << ",\n";
  os << "  \"k\": " << m.k << ",\n";
  os << "  \"alpha\": " << num(m.alpha) << ",\n";
  os << "  \"rule\": " << json(m.rule).dump() << ",\n";
  os << "  \"events\": [";
  const auto& events = tree.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    os << (i == 0 ? "\n" : ",\n") << "    {\"r\": " << num(events[i].radius);
    if (const auto* b = std::get_if<Birth>(&events[i].what)) {
      os << ", \"kind\": \"birth\", \"point\": " << b->point << "}";
    } else {
      const auto& mg = std::get<Merge>(events[i].what);
      os << ", \"kind\": \"merge\", \"a\": " << mg.a << ", \"b\": " << mg.b << "}";
    }
  }
  os << (events.empty() ? "],\n" : "\n  ],\n");
  write_provenance(os, m.provenance, extra);
  os << "}\n";
  return os.str();
}

json report_json(const ExperimentReport& r) {
  json records = json::array();
  for (const auto& t : r.records) {
    records.push_back({{"seed", t.seed}, {"skipped", t.skipped}, {"success", t.success},
                       {"values", t.values}});
  }
  return {{"name", r.name},
          {"density", r.density},
          {"seed", r.seed},
          {"trials", r.trials},
          {"successes", r.successes},
          {"skipped", r.skipped},
          {"success_rate", r.success_rate()},
          {"parameters", r.parameters},
          {"records", records}};
}

std::vector<double> doubles(const json& v, const char* what) {
  if (!v.is_array()) throw DataError(std::string(what) + " must be an array");
  return v.get<std::vector<double>>();
}

}  // namespace

PointSet read_csv(std::istream& in) {
  std::vector<double> coords;
  std::size_t d = 0;
  std::size_t lineno = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto row = parse_row(line);
    if (!row) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw DataError("line " + std::to_string(lineno) + ": malformed row");
    }
    first = false;
    if (d == 0) d = row->size();
    if (row->size() != d)
      throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(d) +
                      " columns, got " + std::to_string(row->size()));
    for (double v : *row) {
      if (!std::isfinite(v)) throw DataError("line " + std::to_string(lineno) + ": non-finite value");
      coords.push_back(v);
    }
  }
  if (coords.empty()) throw DataError("no data rows");
  return PointSet(d, std::move(coords));
}

PointSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const PointSet& points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << num(p[j]);
    out << "\n";
  }
}

std::string tree_to_json(const ClusterTree& tree) { return tree_json(tree, ""); }

std::string pruned_tree_to_json(const PrunedTree& pt) {
  std::string extra = "\"clamp_radius\": " + num(pt.clamp_radius) +
                      ", \"low_cutoff\": " + num(pt.low_cutoff) +
                      ", \"prune_low_levels\": " + (pt.options.prune_low_levels ? "true" : "false");
  return tree_json(pt.pruned, extra);
}

ClusterTree tree_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("tree JSON: ") + e.what());
  }
  try {
    const std::string version = j.at("version").get<std::string>();
    if (version.substr(0, version.find('.')) != "1")
      throw DataError("unsupported tree schema version " + version);
    const auto n = j.at("n").get<std::size_t>();
    TreeMeta meta;
    meta.d = j.at("d").get<std::size_t>();
    meta.k = j.at("k").get<std::size_t>();
    meta.alpha = j.at("alpha").get<double>();
    meta.rule = j.at("rule").get<std::string>();
    std::vector<Event> events;
    for (const auto& e : j.at("events")) {
      const double r = get_radius(e.at("r"));
      const std::string kind = e.at("kind").get<std::string>();
      if (kind == "birth") {
        events.push_back({r, Birth{e.at("point").get<std::size_t>()}});
      } else if (kind == "merge") {
        events.push_back({r, Merge{e.at("a").get<std::size_t>(), e.at("b").get<std::size_t>()}});
      } else {
        throw DataError("unknown event kind " + kind);
      }
    }
    if (j.contains("provenance")) {
      const auto& pv = j["provenance"];
      if (pv.contains("C_delta")) meta.provenance.c_delta = pv["C_delta"].get<double>();
      if (pv.contains("delta")) meta.provenance.delta = pv["delta"].get<double>();
      if (pv.contains("eps_tilde")) meta.provenance.eps_tilde = pv["eps_tilde"].get<double>();
      if (pv.contains("seed")) meta.provenance.seed = pv["seed"].get<std::uint64_t>();
    }
    return ClusterTree(n, std::move(events), std::move(meta));
  } catch (const json::exception& e) {
    throw DataError(std::string("tree JSON: ") + e.what());
  }
}

ClusterTree read_tree_file(const std::string& path) { return tree_from_json(read_text_file(path)); }

std::string labels_to_csv(const std::vector<std::optional<std::size_t>>& labels) {
  std::ostringstream os;
  os << "point,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << i << ",";
    if (labels[i]) {
      os << *labels[i];
    } else {
      os << "unborn";
    }
    os << "\n";
  }
  return os.str();
}

Density density_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("density JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "two_bump") {
      return two_bump(j.at("lambda").get<double>(), j.at("Lambda").get<double>());
    }
    if (kind == "piecewise") {
      std::vector<Segment> segs;
      for (const auto& s : j.at("segments")) {
        const auto pair = doubles(s, "segment");
        if (pair.size() != 2) throw DataError("segment must be [width, density]");
        segs.push_back({pair[0], pair[1]});
      }
      return PiecewiseConstant1D(std::move(segs), j.value("origin", 0.0));
    }
    if (kind == "blobs") {
      SeparatedBlobs f;
      f.d = j.at("d").get<std::size_t>();
      for (const auto& b : j.at("blobs")) {
        f.blobs.push_back({doubles(b.at("center"), "center"), b.at("radius").get<double>(),
                           b.at("density").get<double>()});
      }
      if (j.contains("bridge") && !j["bridge"].is_null()) {
        const auto& b = j["bridge"];
        f.bridge = Box{doubles(b.at("lo"), "lo"), doubles(b.at("hi"), "hi"),
                       b.at("density").get<double>()};
      }
      f.validate();
      return f;
    }
    throw DataError("unknown density kind " + kind);
  } catch (const json::exception& e) {
    throw DataError(std::string("density JSON: ") + e.what());
  }
}

std::string report_to_json(const ExperimentReport& report) {
  return report_json(report).dump(2) + "\n";
}

std::string reports_to_json(const std::vector<ExperimentReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

}  // namespace ctree
