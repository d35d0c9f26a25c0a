#pragma once

// Deterministic dataset ingestion: one subdirectory per class, lexicographic
// file order, seeded shuffle, stratified 10:2:3 train/val/test split.

#include <cstdint>
#include <string>
#include <vector>

namespace wavepack {

enum class Split { train = 0, val = 1, test = 2 };

struct DatasetEntry {
  std::string path;
  int label = 0;
  Split split = Split::train;
};

struct DatasetManifest {
  std::vector<std::string> class_names;  // subdirectory names, sorted
  std::vector<DatasetEntry> entries;     // grouped by class, split order train/val/test
  std::uint64_t seed = 0;

  std::vector<const DatasetEntry*> split_entries(Split s) const;
};

// Scans `root` for class subdirectories and files matching `extensions`
// (e.g. {".png", ".pgm", ".ppm"}; empty means accept every regular file).
// Files are ordered lexicographically, shuffled with `seed`, and split
// per class in the ratio 10:2:3. Unequal class sizes are truncated to the
// smallest class with a warning; an empty class is an error.
DatasetManifest scan_dataset(const std::string& root,
                             const std::vector<std::string>& extensions, std::uint64_t seed);

}  // namespace wavepack
