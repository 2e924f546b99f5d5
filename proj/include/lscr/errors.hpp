#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lscr {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- graph ingestion ---

class MalformedLine : public Error {
public:
    explicit MalformedLine(std::size_t line_number)
        : Error("malformed triple line " + std::to_string(line_number)), line(line_number) {}
    std::size_t line;
};

class TooManyLabels : public Error {
public:
    explicit TooManyLabels(std::size_t label_count)
        : Error("graph uses " + std::to_string(label_count) + " labels, limit is 64"),
          count(label_count) {}
    std::size_t count;
};

class EmptyGraph : public Error {
public:
    EmptyGraph() : Error("input contains no triples") {}
};

class UnknownClass : public Error {
public:
    using Error::Error;
};

// --- constraint parsing ---

class SyntaxError : public Error {
public:
    using Error::Error;
};

class UnknownVertexName : public Error {
public:
    using Error::Error;
};

class UnknownLabelName : public Error {
public:
    using Error::Error;
};

class FocusUnused : public Error {
public:
    using Error::Error;
};

// --- oracles / index / search ---

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class KTooLarge : public Error {
public:
    KTooLarge(std::size_t k, std::size_t vertex_count)
        : Error("k=" + std::to_string(k) + " exceeds vertex count " + std::to_string(vertex_count)) {}
};

class FormatError : public Error {
public:
    using Error::Error;
};

class FingerprintMismatch : public Error {
public:
    using Error::Error;
};

class IndexGraphMismatch : public Error {
public:
    using Error::Error;
};

class InconsistentVsg : public Error {
public:
    using Error::Error;
};

// --- workload generation ---

class SpecInvalid : public Error {
public:
    using Error::Error;
};

class Timeout : public Error {
public:
    using Error::Error;
};

class Unachievable : public Error {
public:
    explicit Unachievable(std::size_t m)
        : Error("no constraint with |V(S,G)| near " + std::to_string(m) + " found"), magnitude(m) {}
    std::size_t magnitude;
};

} // namespace lscr
