"""Conics, quadrics and their pencils, Baer substructures, rational curves,
ruled cubic surfaces, reguli and l_inf-Baer pencils."""
from .baer import (BaerPencil, BaerSubline, BaerSubplane, FqConic, all_fq_conics, baer_closure,
                   baer_subline_through, baer_subplane_through, fq_conic_in_subplane, fq_conic_through)
from .conics import (DegenerateError, conic_to_pencil, infinity_type, linf_meet, locus_at_infinity,
                     parametrize, predicted_locus, random_conic)
from .curves import (RationalCurve, bb_curve, curve_of_fq_conic, moment_curve, nrc_through,
                     specialness)
from .pencils import (ell_inf_pencil_of_3space, partition_tangent_subplane, pencils_about_vertex,
                      three_space_of_pencil)
from .quadrics import QuadricForm, QuadricPencil, quadrics_through
from .reguli import Regulus, circle_check, circle_partition, regulus_through, spread_reguli
from .ruled import RuledCubicSurface, hyperplane_census, random_ruled_cubic

__all__ = ["BaerPencil", "BaerSubline", "BaerSubplane", "DegenerateError", "FqConic", "QuadricForm",
           "QuadricPencil", "RationalCurve", "Regulus", "RuledCubicSurface", "all_fq_conics",
           "baer_closure", "baer_subline_through", "baer_subplane_through", "bb_curve",
           "circle_check", "circle_partition", "conic_to_pencil", "curve_of_fq_conic",
           "ell_inf_pencil_of_3space", "fq_conic_in_subplane", "fq_conic_through",
           "hyperplane_census", "infinity_type", "linf_meet", "locus_at_infinity", "moment_curve",
           "nrc_through", "parametrize", "partition_tangent_subplane", "pencils_about_vertex",
           "predicted_locus", "quadrics_through", "random_conic", "random_ruled_cubic",
           "regulus_through", "specialness", "spread_reguli", "three_space_of_pencil"]
