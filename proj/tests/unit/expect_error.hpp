#pragma once

#include <doctest.h>

#include <functional>

#include "qeffects/error.hpp"

/// Code of the qeffects::Error raised by f; fails the test when nothing is thrown.
inline qeffects::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qeffects::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return qeffects::ErrorCode::InvalidArgument;
}
