// Copyright 2026 The ReST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rest/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "rest/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

namespace rest {

namespace {

constexpr const char* kMagic = "rest-snapshot v1";

struct ArrayEntry {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;  // in doubles
};

void write_doubles(std::ofstream& out, const Tensor& t) {
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(double)));
}

}  // namespace

void save_snapshot(const std::string& prefix, const ModelParams& mp,
                   const ClusterState& clusters, const SnapshotMeta& meta) {
  const auto params = mp.all();

  Tensor counts(1, clusters.counts.size());
  for (std::size_t i = 0; i < clusters.counts.size(); ++i) {
    counts.at(0, i) = static_cast<double>(clusters.counts[i]);
  }

  std::ofstream manifest(prefix + ".manifest");
  if (!manifest) throw IoError("cannot open " + prefix + ".manifest for writing");
  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot open " + prefix + ".bin for writing");

  manifest << kMagic << '\n';
  manifest << "embedding_dim " << meta.embedding_dim << '\n';
  manifest << "attention_softmax " << (meta.attention_softmax ? 1 : 0) << '\n';
  manifest << "mode " << meta.mode_token << '\n';
  manifest << "use_warm " << (meta.use_warm ? 1 : 0) << '\n';
  manifest << "arrays " << params.size() + 2 << '\n';

  std::size_t offset = 0;
  auto emit = [&](const std::string& name, const Tensor& t) {
    manifest << name << ' ' << t.rows() << ' ' << t.cols() << ' ' << offset
             << '\n';
    write_doubles(bin, t);
    offset += t.numel();
  };
  for (const Parameter* p : params) emit(p->name, p->value);
  emit("kmeans.centroids", clusters.centroids);
  emit("kmeans.counts", counts);

  if (!manifest || !bin) throw IoError("write failed for snapshot " + prefix);
}

Snapshot load_snapshot(const std::string& prefix) {
  std::ifstream manifest(prefix + ".manifest");
  if (!manifest) throw IoError("cannot open " + prefix + ".manifest");
  std::string line;
  if (!std::getline(manifest, line) || line != kMagic) {
    throw ParseError(prefix + ".manifest: bad magic line '" + line + "'");
  }

  SnapshotMeta meta;
  std::size_t n_arrays = 0;
  for (int i = 0; i < 5; ++i) {
    if (!std::getline(manifest, line)) {
      throw ParseError(prefix + ".manifest: truncated header");
    }
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "embedding_dim") {
      ss >> meta.embedding_dim;
    } else if (key == "attention_softmax") {
      int v = 0;
      ss >> v;
      meta.attention_softmax = v != 0;
    } else if (key == "mode") {
      ss >> meta.mode_token;
    } else if (key == "use_warm") {
      int v = 0;
      ss >> v;
      meta.use_warm = v != 0;
    } else if (key == "arrays") {
      ss >> n_arrays;
    } else {
      throw ParseError(prefix + ".manifest: unexpected header key '" + key + "'");
    }
    if (!ss) throw ParseError(prefix + ".manifest: bad header line '" + line + "'");
  }

  std::vector<ArrayEntry> entries;
  std::size_t expected_offset = 0;
  for (std::size_t i = 0; i < n_arrays; ++i) {
    if (!std::getline(manifest, line)) {
      throw ParseError(prefix + ".manifest: expected " + std::to_string(n_arrays) +
                       " arrays, got " + std::to_string(i));
    }
    std::istringstream ss(line);
    ArrayEntry e;
    ss >> e.name >> e.rows >> e.cols >> e.offset;
    if (!ss) throw ParseError(prefix + ".manifest: bad array line '" + line + "'");
    if (e.offset != expected_offset) {
      throw ParseError(prefix + ".manifest: non-contiguous offset for " + e.name);
    }
    expected_offset += e.rows * e.cols;
    entries.push_back(std::move(e));
  }

  std::ifstream bin(prefix + ".bin", std::ios::binary | std::ios::ate);
  if (!bin) throw IoError("cannot open " + prefix + ".bin");
  const auto file_bytes = static_cast<std::size_t>(bin.tellg());
  if (file_bytes != expected_offset * sizeof(double)) {
    throw ParseError(prefix + ".bin: " + std::to_string(file_bytes) +
                     " bytes, manifest expects " +
                     std::to_string(expected_offset * sizeof(double)));
  }
  bin.seekg(0);
  std::vector<double> blob(expected_offset);
  bin.read(reinterpret_cast<char*>(blob.data()),
           static_cast<std::streamsize>(file_bytes));
  if (!bin) throw IoError("read failed for " + prefix + ".bin");

  Snapshot snap;
  snap.meta = meta;
  snap.params.d = meta.embedding_dim;
  snap.params.attention_softmax = meta.attention_softmax;

  const auto targets = snap.params.all();
  if (entries.size() != targets.size() + 2) {
    throw ParseError(prefix + ".manifest: " + std::to_string(entries.size()) +
                     " arrays, expected " + std::to_string(targets.size() + 2));
  }
  auto take = [&](const ArrayEntry& e) {
    Tensor t(e.rows, e.cols);
    std::memcpy(t.data(), blob.data() + e.offset, t.numel() * sizeof(double));
    return t;
  };
  const auto& names = ModelParams::param_names();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (entries[i].name != names[i]) {
      throw ParseError(prefix + ".manifest: array " + std::to_string(i) +
                       " is '" + entries[i].name + "', expected '" + names[i] +
                       "'");
    }
    *targets[i] = Parameter(entries[i].name, take(entries[i]));
  }

  // Width sanity against the declared embedding dim.
  const std::uint32_t d = meta.embedding_dim;
  if (snap.params.item_table.value.cols() != d ||
      snap.params.user_table.value.cols() != d ||
      snap.params.brand_table.value.cols() != d ||
      snap.params.category_table.value.cols() != d) {
    throw DimensionError(prefix + ": table width does not match embedding_dim " +
                         std::to_string(d));
  }

  const auto& cent = entries[targets.size()];
  const auto& counts = entries[targets.size() + 1];
  if (cent.name != "kmeans.centroids" || counts.name != "kmeans.counts") {
    throw ParseError(prefix + ".manifest: missing kmeans arrays");
  }
  if (cent.cols != d || counts.rows != 1 || counts.cols != cent.rows) {
    throw DimensionError(prefix + ": kmeans arrays have inconsistent shapes");
  }
  snap.clusters = ClusterState(static_cast<std::uint32_t>(cent.rows), d);
  snap.clusters.centroids = take(cent);
  const Tensor counts_t = take(counts);
  for (std::size_t i = 0; i < counts.cols; ++i) {
    snap.clusters.counts[i] = static_cast<std::uint64_t>(counts_t.at(0, i));
    if (snap.clusters.counts[i] > 0) {
      snap.clusters.size = static_cast<std::uint32_t>(i + 1);
    }
  }
  return snap;
}

}  // namespace rest
