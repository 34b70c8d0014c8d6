"""Shape and impedance reconstruction from near-field backscattering data."""

from ._bsl import (
    BoundaryCurve,
    DomainError,
    ImpedanceModel,
    MeasurementConfig,
    NumericalError,
    ParseError,
    ScatteringDataset,
    add_noise,
    circle_series,
    generate,
    hausdorff_distance,
    indicator,
    load,
    optimize_shape,
    predict_backscatter,
    reconstruct,
    recover_quotients,
    save,
    scattered_field,
)

__all__ = [
    "BoundaryCurve",
    "DomainError",
    "ImpedanceModel",
    "MeasurementConfig",
    "NumericalError",
    "ParseError",
    "ScatteringDataset",
    "add_noise",
    "circle_series",
    "generate",
    "hausdorff_distance",
    "indicator",
    "load",
    "optimize_shape",
    "predict_backscatter",
    "reconstruct",
    "recover_quotients",
    "save",
    "scattered_field",
]
