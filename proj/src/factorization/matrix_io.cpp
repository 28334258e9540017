#include "switchsim/matrix_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace switchsim {

QueueMatrix read_matrix(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw ParameterError("matrix file: missing or negative dimension");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<Count> cells(dim * dim);
  for (auto& c : cells) {
    long long v = 0;
    if (!(in >> v)) throw ParameterError("matrix file: expected " + std::to_string(dim * dim) + " entries");
    c = v;
  }
  std::string extra;
  if (in >> extra) throw ParameterError("matrix file: trailing data '" + extra + "'");
  return QueueMatrix(dim, std::move(cells));
}

QueueMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const QueueMatrix& q) {
  const std::size_t n = q.size();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << q(i, j);
    out << '\n';
  }
}

void write_matching_sequence(std::ostream& out, const MatchingSequence& seq) {
  for (const auto& s : seq) {
    bool first = true;
    for (auto [i, j] : s.pairs()) {
      out << (first ? "" : " ") << i << ':' << j;
      first = false;
    }
    out << '\n';
  }
}

MatchingSequence read_matching_sequence(std::istream& in, std::size_t n) {
  MatchingSequence seq;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::vector<Schedule::Pair> pairs;
    std::string tok;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParameterError("bad pair token '" + tok + "'");
      pairs.emplace_back(std::stoul(tok.substr(0, colon)), std::stoul(tok.substr(colon + 1)));
    }
    seq.push_back(Schedule::from_pairs(n, pairs));
  }
  return seq;
}

}  // namespace switchsim
