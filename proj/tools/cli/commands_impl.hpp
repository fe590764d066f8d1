#pragma once

#include <exception>
#include <ostream>
#include <stdexcept>

namespace eqp::cli {

template <typename F>
int run_command(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const RuntimeAbort& e) {
    err << "abort: " << e.what() << '\n';
    return kExitRuntimeAbort;
  } catch (const std::exception& e) {
    err << "abort: " << e.what() << '\n';
    return kExitRuntimeAbort;
  }
}

}  // namespace eqp::cli
