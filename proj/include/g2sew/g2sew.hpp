#pragma once

// Umbrella header.

#include <g2sew/rational.hpp>
#include <g2sew/series.hpp>
#include <g2sew/modular.hpp>
#include <g2sew/virasoro.hpp>
#include <g2sew/zhu.hpp>
#include <g2sew/sewing.hpp>
#include <g2sew/io.hpp>
#include <g2sew/genus2.hpp>
