// Command line front end. JSON goes to files under --out (or to stdout when
// no directory is given); stdout otherwise carries short human readable
// summaries. Exit codes follow cosetgap::ExitCode.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cosetgap/cocycle.hpp"
#include "cosetgap/error.hpp"
#include "cosetgap/homology.hpp"
#include "cosetgap/tau.hpp"

namespace fs = std::filesystem;
using namespace cosetgap;

namespace {

struct Config {
  std::string presentation;
  std::string subgroup;
  std::string phi;
  std::string n_list;
  std::string out;
  std::string certificate;
  std::size_t ceiling = 30;
  bool force = false;
  double tol = default_tolerance;
  unsigned threads = 1;
  std::size_t limit = default_coset_limit;
  bool no_betti = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path, ExitCode::parse);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Writes `text` to out/name, or to stdout when no directory was given.
void emit(const Config& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / name, text);
}

void validate(const Config& c) {
  if (!(c.tol > 0)) throw Error("--tol must be positive", ExitCode::parse);
  if (c.threads == 0) throw Error("--threads must be positive", ExitCode::parse);
  if (c.ceiling > 30 && !c.force) {
    throw Error("--ceiling above 30 needs --force", ExitCode::parse);
  }
  if (c.ceiling > 63) throw Error("--ceiling cannot exceed 63", ExitCode::parse);
}

EvaluationOptions evaluation(const Config& c) {
  EvaluationOptions o;
  o.cheeger.exhaustive_ceiling = c.ceiling;
  o.cheeger.threads = c.threads;
  o.tol = c.tol;
  o.coset_limit = c.limit;
  o.compute_betti = !c.no_betti;
  return o;
}

FinitePresentation load_presentation(const Config& c) {
  return parse_presentation(read_file(c.presentation));
}

SubgroupSpec load_subgroup(const Config& c, const FinitePresentation& p) {
  if (c.subgroup.empty()) return SubgroupSpec{{}, "trivial"};
  return parse_subgroup(read_file(c.subgroup), p, fs::path(c.subgroup).stem().string());
}

std::vector<long> parse_long_list(const std::string& text, const char* what) {
  std::vector<long> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(std::string("malformed ") + what + " entry '" + item + "'", ExitCode::parse);
    }
  }
  if (out.empty()) throw Error(std::string("empty ") + what, ExitCode::parse);
  return out;
}

// Presentation used for certification and verification: triangular input is
// used as is, anything else is triangularized.
struct Triangular {
  FinitePresentation presentation;
  std::optional<Triangularization> map;
};

Triangular triangular_form(const FinitePresentation& p) {
  if (p.is_triangular()) return {p, std::nullopt};
  auto tri = triangularize(p);
  return {tri.presentation, tri};
}

Word map_word(const Triangular& t, const Word& w) {
  if (!t.map) return w;
  Word out;
  for (Letter x : w) {
    Letter y = t.map->generator_map[static_cast<std::size_t>(std::abs(x) - 1)];
    out.push_back(x > 0 ? y : -y);
  }
  return out;
}

SubgroupSpec map_subgroup(const Triangular& t, const SubgroupSpec& h) {
  SubgroupSpec out{{}, h.label};
  for (const auto& w : h.generators) out.generators.push_back(map_word(t, w));
  return out;
}

int cmd_graph(const Config& c) {
  auto p = load_presentation(c);
  auto h = load_subgroup(c, p);
  auto t = enumerate_cosets(p, h, c.limit);
  auto g = schreier_graph(t, p);
  std::string out = c.out.empty() ? std::string(".") : c.out;
  fs::create_directories(out);
  write_file(fs::path(out) / "graph.dot", to_dot(g));
  write_file(fs::path(out) / "graph.csv", to_edge_csv(g));
  write_file(fs::path(out) / "cosets.csv", t.to_csv(p));
  std::cout << "vertices " << g.num_vertices() << "\nedges " << g.num_edges() << "\n";
  return 0;
}

int cmd_metrics(const Config& c) {
  auto p = load_presentation(c);
  auto h = load_subgroup(c, p);
  auto r = evaluate_subgroup(p, h, evaluation(c));
  emit(c, "metrics.json", record_to_json(r));
  if (!c.out.empty()) {
    std::cout << "index " << r.index << "  [G:N] " << r.index_of_normalizer << "  [N:H] "
              << r.index_over_subgroup << "\n";
    if (r.h) std::cout << "h " << r.h->str() << " (exact)\n";
    else if (r.index >= 2) std::cout << "h in [" << r.h_lower.str() << ", " << r.h_upper << "]\n";
    if (r.lambda1) std::cout << "lambda1 " << *r.lambda1 << "\n";
  }
  return 0;
}

std::vector<long> resolve_phi(const Config& c, const FinitePresentation& p, const CosetTable& base) {
  if (c.phi.empty() || c.phi == "auto") return automatic_phi(p, base);
  return parse_long_list(c.phi, "--phi");
}

int cmd_tower(const Config& c) {
  auto p = load_presentation(c);
  auto h = load_subgroup(c, p);
  if (c.subgroup.empty()) h = SubgroupSpec{{}, "G"};
  if (c.subgroup.empty()) {
    for (std::size_t i = 1; i <= p.num_generators(); ++i) h.generators.push_back(Word{static_cast<Letter>(i)});
  }
  auto n_list = parse_long_list(c.n_list, "--n-list");
  auto opts = evaluation(c);
  auto base = enumerate_cosets(p, h, c.limit);
  auto phi = resolve_phi(c, p, base);
  auto report = evaluate_cyclic_tower(p, h, phi, n_list, opts);
  emit(c, "tower.json", report_to_json(report));
  if (!c.out.empty()) {
    write_file(fs::path(c.out) / "tower.csv", report_to_csv(report));
    std::cout << "n        index    lambda1          q3               q5\n";
    for (const auto& l : report.levels) {
      std::printf("%-8ld %-8zu %-16.10g %-16.10g %-16.10g\n", l.n, l.record.index,
                  l.record.lambda1.value_or(0), l.record.q3.value_or(0), l.record.q5.value_or(0));
    }
  }
  return 0;
}

// Subgroup to certify: a subgroup file, or a tower level over the whole
// group given by --phi and a single --n-list value.
struct Target {
  FinitePresentation given;
  Triangular tri;
  CosetTable table;
  std::optional<std::string> subgroup_words;  // written next to the certificate
};

Target certify_target(const Config& c) {
  auto p = load_presentation(c);
  Target t{p, triangular_form(p), {}, std::nullopt};
  const auto& tp = t.tri.presentation;
  if (!c.n_list.empty()) {
    if (!c.subgroup.empty()) throw Error("give either --subgroup or --n-list", ExitCode::parse);
    auto n_list = parse_long_list(c.n_list, "--n-list");
    if (n_list.size() != 1) throw Error("certify takes a single modulus", ExitCode::parse);
    SubgroupSpec whole;
    for (std::size_t i = 1; i <= tp.num_generators(); ++i) whole.generators.push_back(Word{static_cast<Letter>(i)});
    auto base = enumerate_cosets(tp, whole, c.limit);
    std::vector<long> phi;
    if (c.phi.empty() || c.phi == "auto") {
      phi = automatic_phi(tp, base);
    } else {
      // values on the generators of the given presentation
      auto given = parse_long_list(c.phi, "--phi");
      if (given.size() != p.num_generators()) {
        throw InvalidPhiError("--phi needs one value per generator");
      }
      if (!t.tri.map) {
        phi = given;
      } else {
        for (const auto& def : t.tri.map->definitions) {
          long v = 0;
          for (Letter x : def) v += x > 0 ? given[static_cast<std::size_t>(x - 1)]
                                          : -given[static_cast<std::size_t>(-x - 1)];
          phi.push_back(v);
        }
      }
    }
    auto level = cyclic_tower(tp, base, phi, n_list.front());
    t.table = level.table;
    // words over the given generators, so verify can read them against
    // either presentation
    std::ostringstream words;
    for (const auto& w : schreier_generators(t.table)) {
      if (!t.tri.map) {
        words << format_word(w, p) << "\n";
        continue;
      }
      Word expanded;
      for (Letter x : w) {
        const Word& def = t.tri.map->definitions[static_cast<std::size_t>(std::abs(x) - 1)];
        for (Letter y : x > 0 ? def : def.inverted()) expanded.push_back(y);
      }
      Word reduced = free_reduce(expanded);
      if (!reduced.empty()) words << format_word(reduced, p) << "\n";
    }
    t.subgroup_words = words.str();
  } else {
    auto h = map_subgroup(t.tri, load_subgroup(c, p));
    t.table = enumerate_cosets(tp, h, c.limit);
  }
  return t;
}

int cmd_certify(const Config& c) {
  auto target = certify_target(c);
  const auto& tp = target.tri.presentation;
  CheegerOptions opts;
  opts.exhaustive_ceiling = c.ceiling;
  opts.threads = c.threads;
  Certification cert;
  try {
    cert = certify_infinite_abelianization(tp, target.table, opts);
  } catch (const InapplicableError& e) {
    std::cout << "inapplicable: " << e.what() << "\n";
    return static_cast<int>(ExitCode::inapplicable);
  }
  auto x = schreier_graph(target.table, tp);
  emit(c, "certificate.json", certificate_to_json(cert, x));
  if (!c.out.empty()) {
    write_file(fs::path(c.out) / "presentation.pres", serialize_presentation(target.given));
    if (target.subgroup_words) write_file(fs::path(c.out) / "subgroup.sub", *target.subgroup_words);
    std::cout << "certificate: " << x.num_vertices() << " cosets, witness value "
              << cert.certificate.witness_value << ", betti " << cert.betti << "\n";
  }
  return 0;
}

int cmd_verify(const Config& c) {
  if (c.certificate.empty()) throw Error("--certificate is required", ExitCode::parse);
  auto p = load_presentation(c);
  auto tri = triangular_form(p);
  auto h = map_subgroup(tri, load_subgroup(c, p));
  auto t = enumerate_cosets(tri.presentation, h, c.limit);
  auto report = verify_certificate(read_file(c.certificate), tri.presentation, t);
  std::cout << "accepted: " << report.vertices << " cosets, witness value " << report.witness_value
            << ", " << report.relator_loops << " relator loops vanish\n";
  return 0;
}

int cmd_homology(const Config& c) {
  auto p = load_presentation(c);
  FinitePresentation target = p;
  std::size_t index = 1;
  if (!c.subgroup.empty()) {
    auto t = enumerate_cosets(p, load_subgroup(c, p), c.limit);
    index = t.size();
    target = reidemeister_schreier(p, t);
  }
  auto snf = smith_normal_form(abelianization_matrix(target));
  nlohmann::ordered_json j;
  j["schema"] = report_schema_version;
  j["index"] = index;
  j["generators"] = target.num_generators();
  j["relators"] = target.relators().size();
  nlohmann::ordered_json diag = nlohmann::ordered_json::array();
  for (const auto& d : snf.diagonal) diag.push_back(to_string(d));
  j["diagonal"] = std::move(diag);
  j["rank"] = snf.rank;
  j["betti"] = snf.betti;
  nlohmann::ordered_json tor = nlohmann::ordered_json::array();
  for (const auto& d : snf.torsion) tor.push_back(to_string(d));
  j["torsion"] = std::move(tor);
  if (snf.betti > 0) {
    auto phi = phi_from_abelianization(target);
    j["phi"] = phi.values;
    j["max_phi"] = phi.max_abs;
  }
  emit(c, "homology.json", j.dump(2) + "\n");
  if (!c.out.empty()) std::cout << "betti " << snf.betti << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schreier coset graphs, Cheeger constants, spectral gaps and cocycle certificates"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--presentation", c.presentation, "presentation file")->required();
    sub->add_option("--subgroup", c.subgroup, "subgroup generator words (default: trivial)");
    sub->add_option("--limit", c.limit, "coset enumeration limit");
    if (needs_out) sub->add_option("--out", c.out, "output directory");
  };
  auto metric_flags = [&](CLI::App* sub) {
    sub->add_option("--ceiling", c.ceiling, "exhaustive Cheeger search ceiling (vertices)");
    sub->add_flag("--force", c.force, "allow a ceiling above 30");
    sub->add_option("--tol", c.tol, "eigensolver relative tolerance");
    sub->add_option("--threads", c.threads, "worker threads");
    sub->add_flag("--no-betti", c.no_betti, "skip the homology oracle");
  };

  auto* graph = app.add_subcommand("graph", "write the Schreier graph as DOT and CSV");
  common(graph, true);
  auto* metrics = app.add_subcommand("metrics", "h, lambda1, normalizer indices and products");
  common(metrics, true);
  metric_flags(metrics);
  auto* tower = app.add_subcommand("tower", "cyclic tower report");
  common(tower, true);
  metric_flags(tower);
  tower->add_option("--phi", c.phi, "comma separated values on Schreier generators, or auto");
  tower->add_option("--n-list", c.n_list, "comma separated moduli, increasing, each > 2")->required();
  auto* certify = app.add_subcommand("certify", "meta-cocycle certificate of infinite abelianization");
  common(certify, true);
  metric_flags(certify);
  certify->add_option("--phi", c.phi, "values on the generators, or auto");
  certify->add_option("--n-list", c.n_list, "single modulus of a tower level over G");
  auto* verify = app.add_subcommand("verify", "re-check a certificate");
  common(verify, false);
  verify->add_option("--certificate", c.certificate, "certificate JSON")->required();
  auto* homology = app.add_subcommand("homology", "Smith normal form of H_1");
  common(homology, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::parse);
  }

  try {
    validate(c);
    if (*graph) return cmd_graph(c);
    if (*metrics) return cmd_metrics(c);
    if (*tower) return cmd_tower(c);
    if (*certify) return cmd_certify(c);
    if (*verify) return cmd_verify(c);
    if (*homology) return cmd_homology(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }
  return 0;
}
