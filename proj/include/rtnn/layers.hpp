#pragma once

#include <rtnn/layers/activation.hpp>
#include <rtnn/layers/conv1d.hpp>
#include <rtnn/layers/dense.hpp>
#include <rtnn/layers/gru.hpp>
#include <rtnn/layers/lstm.hpp>
