#pragma once

#include <stdexcept>
#include <string>

namespace fda {

// Base class for every error thrown by this library. Catching fda::Error is
// enough to distinguish library failures from programming errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- linear algebra ----

class SingularSystem : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// ---- data / grids ----

class GridMismatch : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class TooFewSubjects : public Error {
public:
    using Error::Error;
};

// ---- smoothing ----

// Thrown when a local fit stays singular even after the bandwidth-widening
// fallback; carries the subject id and evaluation point in the message.
class InsufficientLocalData : public Error {
public:
    using Error::Error;
};

class NoFeasibleBandwidth : public Error {
public:
    using Error::Error;
};

// ---- regression / inference ----

class RankDeficientDesign : public Error {
public:
    using Error::Error;
};

class SingularRestriction : public Error {
public:
    using Error::Error;
};

class EmptyInterval : public Error {
public:
    using Error::Error;
};

class ZeroTrace : public Error {
public:
    using Error::Error;
};

class DegenerateMixture : public Error {
public:
    using Error::Error;
};

class ZeroEigenvalue : public Error {
public:
    using Error::Error;
};

// ---- input files ----

class ParseError : public Error {
public:
    using Error::Error;
};

class DuplicateTimePoint : public Error {
public:
    using Error::Error;
};

class EmptyAfterFilter : public Error {
public:
    using Error::Error;
};

} // namespace fda
