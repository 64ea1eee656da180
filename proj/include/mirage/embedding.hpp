#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mirage/errors.hpp"

namespace mirage {

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
};

// Comparisons require matching model and dimensionality.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.model_id != b.model_id) {
        throw ConfigError("cannot compare embeddings from models '" + a.model_id + "' and '" +
                          b.model_id + "'");
    }
    if (a.values.size() != b.values.size()) {
        throw ConfigError("embedding dimensionality mismatch: " +
                          std::to_string(a.values.size()) + " vs " +
                          std::to_string(b.values.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::string id() const = 0;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& inputs) = 0;
};

// Deterministic embedding table for tests and golden runs. Unknown inputs
// are configuration errors rather than silent zero vectors.
class FixtureEmbeddingBackend : public EmbeddingBackend {
public:
    explicit FixtureEmbeddingBackend(std::string id = "embed-fixture") : id_(std::move(id)) {}

    void set(const std::string& input, std::vector<double> values) {
        table_[input] = std::move(values);
    }

    std::string id() const override { return id_; }

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& inputs) override {
        std::vector<EmbeddingVector> out;
        out.reserve(inputs.size());
        for (const auto& s : inputs) {
            auto it = table_.find(s);
            if (it == table_.end()) {
                throw ConfigError("embedding fixture has no vector for '" + s + "'");
            }
            out.push_back(EmbeddingVector{it->second, id_});
        }
        return out;
    }

private:
    std::string id_;
    std::map<std::string, std::vector<double>> table_;
};

}  // namespace mirage
