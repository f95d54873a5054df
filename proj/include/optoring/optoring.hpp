// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "optoring/benchmark.hpp"
#include "optoring/config.hpp"
#include "optoring/elimination.hpp"
#include "optoring/errors.hpp"
#include "optoring/meanfield.hpp"
#include "optoring/model.hpp"
#include "optoring/report.hpp"
#include "optoring/ring.hpp"
#include "optoring/sweep.hpp"
