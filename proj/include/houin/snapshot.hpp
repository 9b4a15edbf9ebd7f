#pragma once

#include <string>

#include "houin/maintainer.hpp"

namespace houin {

// Versioned, self-contained engine snapshot: config block, item/profit
// table, fingerprinted database, per-period tree sections, and the cached
// result TSV. Loading it back and refreshing with an empty batch reproduces
// the cached TSV byte-for-byte.
std::string write_snapshot(const EngineState& state, const ItemCatalog& catalog,
                           const std::string& result_tsv);

struct LoadedState {
    EngineState state;
    ItemCatalog catalog;
    std::string cached_tsv;
};

// Throws FingerprintMismatchError when the embedded database does not hash
// to the recorded fingerprint; ParseError on structural damage.
LoadedState load_snapshot(const std::string& text);

}  // namespace houin
