#include "byzcast/path_index.hpp"

#include <algorithm>

namespace byzcast {

PathIndex::PathIndex(const Graph& g) : n_(g.n()) {
  struct Pending {
    size_t slot;
    PathId child;
  };
  std::vector<Pending> links;

  by_len_terminal_.assign(static_cast<size_t>(n_ + 1) * n_, {});
  for (NodeId v = 0; v < n_; ++v) {
    parent_.push_back(kNoPath);
    last_.push_back(static_cast<std::uint8_t>(v));
    src_.push_back(static_cast<std::uint8_t>(v));
    len_.push_back(1);
    mask_.push_back(bit_of(v));
    by_len_terminal_[static_cast<size_t>(1) * n_ + v].push_back(v);
  }

  PathId level_begin = 0;
  PathId level_end = n_;
  for (int len = 1; len < n_ && level_begin < level_end; ++len) {
    for (PathId p = level_begin; p < level_end; ++p) {
      for (NodeId w : g.neighbors(last_[p])) {
        if (mask_has(mask_[p], w)) continue;
        PathId child = static_cast<PathId>(parent_.size());
        parent_.push_back(p);
        last_.push_back(static_cast<std::uint8_t>(w));
        src_.push_back(src_[p]);
        len_.push_back(static_cast<std::uint8_t>(len + 1));
        mask_.push_back(mask_[p] | bit_of(w));
        by_len_terminal_[static_cast<size_t>(len + 1) * n_ + w].push_back(child);
        links.push_back({static_cast<size_t>(p) * n_ + w, child});
      }
    }
    level_begin = level_end;
    level_end = static_cast<PathId>(parent_.size());
  }

  ext_.assign(parent_.size() * static_cast<size_t>(n_), kNoPath);
  for (const Pending& l : links) ext_[l.slot] = l.child;
}

PathId PathIndex::resolve(std::span<const NodeId> seq) const {
  if (seq.empty()) return kNoPath;
  if (seq[0] < 0 || seq[0] >= n_) return kNoPath;
  PathId p = single(seq[0]);
  for (size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] < 0 || seq[i] >= n_) return kNoPath;
    p = extend(p, seq[i]);
    if (p == kNoPath) return kNoPath;
  }
  return p;
}

std::vector<NodeId> PathIndex::sequence(PathId p) const {
  std::vector<NodeId> seq;
  for (PathId at = p; at != kNoPath; at = parent_[at])
    seq.push_back(last_[at]);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

}  // namespace byzcast
