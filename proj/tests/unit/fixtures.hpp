#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cosetgap/coset.hpp"
#include "cosetgap/graph.hpp"
#include "cosetgap/presentation.hpp"

#ifndef COSETGAP_DATA_DIR
#error "COSETGAP_DATA_DIR must be defined"
#endif

namespace fixture {

inline std::string read(const std::string& name) {
  std::ifstream in(std::string(COSETGAP_DATA_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline cosetgap::FinitePresentation pres(const std::string& text) {
  return cosetgap::parse_presentation(text);
}

inline cosetgap::FinitePresentation data(const std::string& name) {
  return cosetgap::parse_presentation(read(name));
}

inline cosetgap::SubgroupSpec sub(const cosetgap::FinitePresentation& p, const std::string& words) {
  return cosetgap::SubgroupSpec{cosetgap::parse_word_list(words, p), words};
}

inline cosetgap::CosetTable table(const cosetgap::FinitePresentation& p, const std::string& words) {
  return cosetgap::enumerate_cosets(p, sub(p, words));
}

inline cosetgap::LabeledMultigraph graph(const cosetgap::FinitePresentation& p, const std::string& words) {
  return cosetgap::schreier_graph(table(p, words), p);
}

// Cayley graph of Z_n with the given jumps, one label per jump.
inline cosetgap::LabeledMultigraph circulant(std::size_t n, const std::vector<long>& jumps) {
  std::vector<std::string> names;
  std::vector<std::int32_t> targets;
  for (std::size_t j = 0; j < jumps.size(); ++j) names.push_back("s" + std::to_string(j));
  for (std::size_t v = 0; v < n; ++v)
    for (long j : jumps)
      targets.push_back(static_cast<std::int32_t>((static_cast<long>(v) + j) % static_cast<long>(n)));
  return cosetgap::LabeledMultigraph(n, names, targets);
}

inline cosetgap::FinitePresentation cyclic(int n) {
  return pres("gens: a\nrels: " + std::string(static_cast<std::size_t>(n), 'a') + "\n");
}

}  // namespace fixture
