#pragma once

#include <filesystem>
#include <string>

#include "expi/oeis.hpp"
#include "expi/real.hpp"
#include "expi/series.hpp"

namespace expi::testing {

inline std::filesystem::path fixture_dir() { return EXPI_FIXTURE_DIR; }
inline std::filesystem::path bfile_dir() { return fixture_dir() / "bfiles"; }
inline std::filesystem::path list_dir() { return fixture_dir() / "lists"; }

// Fixture b-file for an id, e.g. "A000041", with its offset and up to max_terms terms.
inline IntegerSequence load_fixture(const std::string& id, std::size_t max_terms = 2000) {
  BFile b = parse_bfile(read_file(bfile_dir() / bfile_name(id)), true, id);
  IntegerSequence seq = to_sequence(b, max_terms);
  seq.id = id;
  return seq;
}

// log10 |a - b|, -infinity when equal.
inline double diff_log10(const Real& a, const Real& b) { return (a - b).log10_abs(); }

}  // namespace expi::testing
