#pragma once

#include <doctest.h>

#include <functional>

#include "sorlayout/error.hpp"

// Runs f and returns the code of the Error it throws.
inline sorlayout::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const sorlayout::Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return sorlayout::ErrorCode::kBadRequest;
}
