#pragma once

#include <stdexcept>
#include <string>

namespace trendforest {

/// Base class for every recoverable data/model error raised by the library.
/// The CLI maps these to exit code 2; usage problems raise UsageError (exit 1).
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// --- market_data ---

struct MalformedRow : Error {
    int line_no;
    MalformedRow(int line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_no(line) {}
};

struct DuplicateDate : Error {
    std::string date;
    explicit DuplicateDate(const std::string& iso_date)
        : Error("duplicate date: " + iso_date), date(iso_date) {}
};

struct EmptyInput : Error {
    EmptyInput() : Error("input contains no data rows") {}
};

struct NetworkError : Error {
    explicit NetworkError(const std::string& detail) : Error("network error: " + detail) {}
};

struct NonSuccessStatus : Error {
    int code;
    explicit NonSuccessStatus(int status)
        : Error("server returned status " + std::to_string(status)), code(status) {}
};

// --- preprocess ---

struct EmptySeries : Error {
    EmptySeries() : Error("series is empty") {}
};

struct AlphaOutOfRange : Error {
    explicit AlphaOutOfRange(double alpha)
        : Error("alpha must be in (0,1], got " + std::to_string(alpha)) {}
};

struct HorizonTooLarge : Error {
    explicit HorizonTooLarge(int horizon, long length)
        : Error("horizon " + std::to_string(horizon) + " does not fit a series of length " +
                std::to_string(length)) {}
};

// --- indicators ---

struct SeriesTooShort : Error {
    explicit SeriesTooShort(const std::string& detail) : Error("series too short: " + detail) {}
};

struct FlatWindow : Error {
    long index;
    explicit FlatWindow(long at)
        : Error("flat high/low window at index " + std::to_string(at)), index(at) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& detail) : Error("length mismatch: " + detail) {}
};

struct NoUsableRows : Error {
    NoUsableRows() : Error("no rows survive indicator warm-up and label truncation") {}
};

// --- separability ---

struct TooFewRows : Error {
    explicit TooFewRows(const std::string& detail) : Error("too few rows: " + detail) {}
};

// --- forest ---

struct NotADistribution : Error {
    explicit NotADistribution(const std::string& detail)
        : Error("not a probability distribution: " + detail) {}
};

struct EmptyChild : Error {
    EmptyChild() : Error("split produces an empty child") {}
};

struct CountMismatch : Error {
    CountMismatch() : Error("child class counts do not sum to the parent's") {}
};

struct SingleClassData : Error {
    SingleClassData() : Error("data contains a single class; both labels are required") {}
};

struct BadMTry : Error {
    explicit BadMTry(int mtry, int features)
        : Error("mtry must be in [1," + std::to_string(features) + "], got " +
                std::to_string(mtry)) {}
};

struct NoOobRows : Error {
    NoOobRows() : Error("every row appears in every bootstrap bag; no out-of-bag votes") {}
};

// --- evaluate ---

struct DegenerateSplit : Error {
    explicit DegenerateSplit(const std::string& detail) : Error("degenerate split: " + detail) {}
};

struct SingleClassTruth : Error {
    SingleClassTruth() : Error("truth labels contain a single class") {}
};

struct EmptyTestSet : Error {
    EmptyTestSet() : Error("test set is empty") {}
};

// --- config ---

struct ParseError : Error {
    int line_no;
    ParseError(int line, const std::string& detail)
        : Error("config line " + std::to_string(line) + ": " + detail), line_no(line) {}
};

struct RangeError : Error {
    std::string field;
    RangeError(const std::string& key, const std::string& detail)
        : Error("config field '" + key + "': " + detail), field(key) {}
};

}  // namespace trendforest
