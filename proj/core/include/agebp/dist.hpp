#pragma once

#include "agebp/effective.hpp"
#include "agebp/improper.hpp"
#include "agebp/lifetime.hpp"
#include "agebp/offspring.hpp"
