#include <rtnn/model/static_model.hpp>

int main() {
    // tanh has 5 channels but the dense layer before it produces 4.
    rtnn::ModelT<double, 3, 1, rtnn::DenseT<double, 3, 4>, rtnn::TanhActivationT<double, 5>,
                 rtnn::DenseT<double, 5, 1>>
        model;
    model.reset();
    return 0;
}
