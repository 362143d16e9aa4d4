#include <rtnn/model/static_model.hpp>

int main() {
    rtnn::ModelT<double, 3, 1, rtnn::DenseT<double, 3, 4>, rtnn::TanhActivationT<double, 4>,
                 rtnn::DenseT<double, 4, 1>>
        model;
    model.reset();
    return 0;
}
