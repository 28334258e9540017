#pragma once
// Plain-text matrix format: a first line holding n, then n lines of n
// whitespace-separated non-negative integers. Matching sequences are written
// one slot per line as space-separated `i:j` pairs (0-based indices).

#include <filesystem>
#include <iosfwd>
#include <string>

#include "switchsim/queue_matrix.hpp"
#include "switchsim/schedule.hpp"

namespace switchsim {

QueueMatrix read_matrix(std::istream& in);
QueueMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const QueueMatrix& q);

void write_matching_sequence(std::ostream& out, const MatchingSequence& seq);
MatchingSequence read_matching_sequence(std::istream& in, std::size_t n);

}  // namespace switchsim
