#pragma once

#include <filesystem>
#include <iosfwd>

#include "lrrf/forest.hpp"

namespace lrrf {

// Text model format, version 1:
//
//   LRRF-MODEL 1
//   config trees=T depth=D entropy=E features=F min-node=N seed=S tie=lowest|random:S
//   labels M
//   attributes a1,...,ad
//   tree K                 (K nodes in preorder, then K node lines)
//   N <attribute> <threshold>
//   L <count> <ranking> ...
//   checksum <16 hex digits>   (FNV-1a 64 over every preceding byte)
//
// Thresholds are shortest round-trip decimals, so a loaded forest predicts
// exactly like the saved one.
void write_model(std::ostream& out, const Forest& forest);
Forest read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Forest& forest);
Forest load_model(const std::filesystem::path& path);

}  // namespace lrrf
