#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qa {

/// Text embedder contract: fixed dimension, unit-norm output.
struct Embedder {
    int dimension;
    std::function<std::vector<float>(const std::string&)> embed;
};

/// Deterministic hashed character-trigram embedder, dimension 256,
/// L2-normalized. Offline default; a remote embedding service can be plugged
/// in through the same struct.
Embedder hashed_ngram_embedder();

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b);

/// Coarse ranking of candidate relations. At or below the threshold the list
/// passes through untouched; above it, the top-`threshold` candidates by
/// cosine similarity to the question are kept (ties broken by name), then
/// shuffled with the seeded RNG to remove score-order bias.
std::vector<std::string> rank_relations(const std::string& question,
                                        const std::vector<std::string>& candidates,
                                        const Embedder& embedder, size_t threshold = 40,
                                        unsigned seed = 0);

}  // namespace qa
