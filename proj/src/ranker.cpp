#include "qa/ranker.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>

namespace qa {

namespace {

constexpr int kDimension = 256;

uint64_t fnv1a(const char* data, size_t len) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

Embedder hashed_ngram_embedder() {
    Embedder e;
    e.dimension = kDimension;
    e.embed = [](const std::string& text) {
        std::string lower;
        lower.reserve(text.size());
        for (char c : text) {
            lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        std::vector<float> v(kDimension, 0.0f);
        // Pad so short strings still produce trigrams.
        std::string padded = "^" + lower + "$";
        for (size_t i = 0; i + 3 <= padded.size(); ++i) {
            v[fnv1a(padded.data() + i, 3) % kDimension] += 1.0f;
        }
        double norm = 0;
        for (float x : v) norm += static_cast<double>(x) * x;
        if (norm > 0) {
            float inv = static_cast<float>(1.0 / std::sqrt(norm));
            for (float& x : v) x *= inv;
        }
        return v;
    };
    return e;
}

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0) return 0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> rank_relations(const std::string& question,
                                        const std::vector<std::string>& candidates,
                                        const Embedder& embedder, size_t threshold,
                                        unsigned seed) {
    if (candidates.size() <= threshold) return candidates;

    auto question_vec = embedder.embed(question);
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(candidates.size());
    for (const auto& c : candidates) {
        scored.emplace_back(cosine_similarity(question_vec, embedder.embed(c)), c);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> kept;
    kept.reserve(threshold);
    for (size_t i = 0; i < threshold; ++i) kept.push_back(scored[i].second);

    // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is
    // implementation-defined, and replay tests need stable output.
    std::mt19937 rng(seed);
    for (size_t i = kept.size() - 1; i > 0; --i) {
        size_t j = rng() % (i + 1);
        std::swap(kept[i], kept[j]);
    }
    return kept;
}

}  // namespace qa
