#pragma once

#include <filesystem>
#include <iosfwd>

#include "zakai/chaos_propagator.hpp"

namespace zakai {

enum class TableEncoding { Text, Binary };

/// Propagator table file.
///
/// Header lines `version=1`, `K=`, `r=`, `delta=`, `N=`, `n=`, `substeps=`,
/// then basis metadata `d=`, `gammas=`, `lambdas=`, then `count=` and
/// `encoding=`. The body holds `matrix A`, `matrix B<l>` and one
/// `alpha <index>` block per multi-index, each followed by K x K row-major
/// entries: 17-significant-digit decimal text, or 64-bit little-endian
/// doubles for the binary encoding. The file ends with `end`.
void write_table(std::ostream& out, const PropagatorTable& table, TableEncoding encoding);
PropagatorTable read_table(std::istream& in);

void save_table(const std::filesystem::path& path, const PropagatorTable& table,
                TableEncoding encoding = TableEncoding::Text);
PropagatorTable load_table(const std::filesystem::path& path);

}  // namespace zakai
