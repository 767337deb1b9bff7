#pragma once

#include <stdexcept>
#include <string>

namespace dagmt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core
struct RangeError : Error {
  using Error::Error;
};
struct AssemblyError : Error {
  using Error::Error;
};

// gateway
struct TransportError : Error {
  using Error::Error;
};
struct AuthError : Error {
  using Error::Error;
};
struct PayloadError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct RenderError : Error {
  using Error::Error;
};
struct MockScriptError : Error {
  using Error::Error;
};

// memory extraction failures carry the component that produced them
struct ComponentError : Error {
  std::string component;
  ComponentError(std::string comp, const std::string& msg)
      : Error("[" + comp + "] " + msg), component(std::move(comp)) {}
};

// metrics
struct UndefinedMetricError : Error {
  using Error::Error;
};

// configuration / CLI
struct ConfigError : Error {
  using Error::Error;
};

// pipeline failures carry the stage and node they occurred at
struct PipelineError : Error {
  std::string stage;
  int node;  // -1 when not node-specific
  PipelineError(std::string stage_, int node_, const std::string& msg)
      : Error("stage " + stage_ + (node_ >= 0 ? " node " + std::to_string(node_) : "") + ": " + msg),
        stage(std::move(stage_)),
        node(node_) {}
};

}  // namespace dagmt
