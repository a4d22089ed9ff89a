#pragma once

#include "collabnet/graph.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixture {

using collabnet::CollabNetwork;
using collabnet::WeightedEdge;

inline CollabNetwork path3() { return CollabNetwork({}, {{"A", "B", 1.0}, {"B", "C", 1.0}}); }

inline CollabNetwork triangle() { return CollabNetwork({}, {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 1.0}}); }

// Center "C", leaves "L1".."Lk".
inline CollabNetwork star(int leaves) {
    std::vector<WeightedEdge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({"C", "L" + std::to_string(i), 1.0});
    return CollabNetwork({}, e);
}

inline CollabNetwork complete(int n, double w = 1.0) {
    std::vector<std::string> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back("K" + std::to_string(i));
    std::vector<WeightedEdge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({nodes[i], nodes[j], w});
    return CollabNetwork(nodes, e);
}

inline CollabNetwork cycle(int n) {
    std::vector<WeightedEdge> e;
    for (int i = 0; i < n; ++i) e.push_back({"V" + std::to_string(i), "V" + std::to_string((i + 1) % n), 1.0});
    return CollabNetwork({}, e);
}

// Triangles {A,B,C} and {D,E,F} joined by C-D.
inline CollabNetwork two_triangles() {
    return CollabNetwork({}, {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 1.0}, {"D", "E", 1.0}, {"E", "F", 1.0},
                              {"D", "F", 1.0}, {"C", "D", 1.0}});
}

// w_AB = 100, w_BC = 100, w_AC = 1, w_AD = 2.
inline CollabNetwork appendix() {
    return CollabNetwork({}, {{"A", "B", 100.0}, {"B", "C", 100.0}, {"A", "C", 1.0}, {"A", "D", 2.0}});
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path = std::filesystem::temp_directory_path() / ("collabnet-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

} // namespace fixture
