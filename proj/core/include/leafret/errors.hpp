#pragma once

#include <stdexcept>
#include <string>

namespace leafret {

// Base of every pipeline failure. `stage()` names the step that raised it so
// callers (CLI, index builder) can report where an image was rejected.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class UnimodalHistogramError : public PipelineError {
public:
    explicit UnimodalHistogramError(const std::string& what)
        : PipelineError("unimodal-histogram", what) {}
};

class EmptySegmentationError : public PipelineError {
public:
    explicit EmptySegmentationError(const std::string& what)
        : PipelineError("empty-segmentation", what) {}
};

class DegenerateShapeError : public PipelineError {
public:
    explicit DegenerateShapeError(const std::string& what)
        : PipelineError("degenerate-shape", what) {}
};

class ImageIoError : public PipelineError {
public:
    explicit ImageIoError(const std::string& what) : PipelineError("image-io", what) {}
};

class CorpusError : public PipelineError {
public:
    explicit CorpusError(const std::string& what) : PipelineError("corpus", what) {}
};

class VersionMismatchError : public PipelineError {
public:
    explicit VersionMismatchError(const std::string& what)
        : PipelineError("version-mismatch", what) {}
};

class MalformedIndexError : public PipelineError {
public:
    MalformedIndexError(std::size_t line, const std::string& what)
        : PipelineError("malformed-index", "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace leafret
