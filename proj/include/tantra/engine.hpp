#pragma once

#include "tantra/ecosystem.hpp"
#include "tantra/entropy.hpp"
#include "tantra/normative.hpp"
#include "tantra/relators.hpp"
#include "tantra/sector_data.hpp"

namespace tantra {

// One store plus every model view over it. The views hold references into
// `store`, so the engine is neither copyable nor movable.
struct Engine {
  GraphStore store;
  TantraModel model{store};
  RelatorModel relators{store, model};
  SeparationModel separations{store};
  NormativeModel normative{store, model};
  SectorData sector{store, model, relators, normative};
  EcosystemModel ecosystem{store};

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void load(const std::filesystem::path& path) { store = GraphStore::load(path); }
  void save(const std::filesystem::path& path) const { store.save(path); }
};

}  // namespace tantra
