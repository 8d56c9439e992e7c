#pragma once

#include <stdexcept>
#include <string>

namespace hhsq {

// Error taxonomy shared by the engine and the CLI exit-code mapping.
enum class ErrorClass {
    Parse,       // malformed input documents
    Validation,  // structural data rejected before any pipeline runs
    Pipeline,    // a computation violated one of its run-time preconditions
};

struct EngineError : std::runtime_error {
    EngineError(ErrorClass c, const std::string& what) : std::runtime_error(what), cls(c) {}
    ErrorClass cls;
};

struct TruncationExceeded : EngineError {
    explicit TruncationExceeded(int degree, int bound)
        : EngineError(ErrorClass::Pipeline,
                      "degree " + std::to_string(degree) + " exceeds truncation bound " +
                          std::to_string(bound)) {}
};

struct ParseError : EngineError {
    explicit ParseError(const std::string& what) : EngineError(ErrorClass::Parse, what) {}
};

struct ValidationError : EngineError {
    explicit ValidationError(const std::string& what) : EngineError(ErrorClass::Validation, what) {}
};

struct UnsupportedDifferential : ValidationError {
    explicit UnsupportedDifferential(const std::string& gen)
        : ValidationError("generator " + gen +
                          " has a nonzero differential but appears in a # pair") {}
};

struct ChainMapViolation : ValidationError {
    explicit ChainMapViolation(const std::string& what) : ValidationError(what) {}
};

struct DegreeMismatch : ValidationError {
    explicit DegreeMismatch(const std::string& what) : ValidationError(what) {}
};

struct NotCommutative : ValidationError {
    explicit NotCommutative(const std::string& what) : ValidationError(what) {}
};

struct PipelineError : EngineError {
    explicit PipelineError(const std::string& what) : EngineError(ErrorClass::Pipeline, what) {}
};

struct NotACycle : PipelineError {
    explicit NotACycle(const std::string& where) : PipelineError("not a cycle: " + where) {}
};

struct NotSurjectiveHere : PipelineError {
    explicit NotSurjectiveHere(const std::string& where)
        : PipelineError("map not surjective at " + where) {}
};

struct KernelNotAcyclicHere : PipelineError {
    explicit KernelNotAcyclicHere(const std::string& where)
        : PipelineError("kernel not acyclic at " + where +
                        " (insufficient truncation margin)") {}
};

struct CartanMismatch : PipelineError {
    explicit CartanMismatch(const std::string& what) : PipelineError(what) {}
};

}  // namespace hhsq
