#include "wavepack/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "wavepack/errors.hpp"
#include "wavepack/rng.hpp"

namespace fs = std::filesystem;

namespace wavepack {

std::vector<const DatasetEntry*> DatasetManifest::split_entries(Split s) const {
  std::vector<const DatasetEntry*> out;
  for (const DatasetEntry& e : entries)
    if (e.split == s) out.push_back(&e);
  return out;
}

DatasetManifest scan_dataset(const std::string& root,
                             const std::vector<std::string>& extensions, std::uint64_t seed) {
  if (!fs::is_directory(root)) throw io_error("dataset root is not a directory: " + root);

  DatasetManifest manifest;
  manifest.seed = seed;
  for (const fs::directory_entry& d : fs::directory_iterator(root))
    if (d.is_directory()) manifest.class_names.push_back(d.path().filename().string());
  std::sort(manifest.class_names.begin(), manifest.class_names.end());
  if (manifest.class_names.size() < 2)
    throw io_error("dataset needs at least two class subdirectories under " + root);

  std::vector<std::vector<std::string>> files(manifest.class_names.size());
  for (std::size_t c = 0; c < manifest.class_names.size(); ++c) {
    const fs::path dir = fs::path(root) / manifest.class_names[c];
    for (const fs::directory_entry& f : fs::directory_iterator(dir)) {
      if (!f.is_regular_file()) continue;
      if (!extensions.empty()) {
        const std::string ext = f.path().extension().string();
        if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
      }
      files[c].push_back(f.path().string());
    }
    if (files[c].empty())
      throw io_error("class directory has no matching files: " + dir.string());
    std::sort(files[c].begin(), files[c].end());
  }

  std::size_t min_count = files[0].size();
  for (const auto& list : files) min_count = std::min(min_count, list.size());

  // One generator drives every class so the manifest depends only on the
  // seed and the (sorted) directory contents.
  Rng rng(seed);
  for (std::size_t c = 0; c < files.size(); ++c) {
    std::vector<std::string>& list = files[c];
    rng.shuffle(list);
    if (list.size() > min_count) {
      std::cerr << "warning: class '" << manifest.class_names[c] << "' has " << list.size()
                << " files; truncating to " << min_count << " to keep splits stratified\n";
      list.resize(min_count);
    }
    // 10:2:3 of every 15; remainder goes to test.
    const std::size_t n_train = min_count * 10 / 15;
    const std::size_t n_val = min_count * 2 / 15;
    for (std::size_t i = 0; i < list.size(); ++i) {
      DatasetEntry e;
      e.path = std::move(list[i]);
      e.label = static_cast<int>(c);
      e.split = i < n_train ? Split::train : (i < n_train + n_val ? Split::val : Split::test);
      manifest.entries.push_back(std::move(e));
    }
  }
  return manifest;
}

}  // namespace wavepack
