"""Exact-arithmetic workbench for quiver path coalgebras: monomial
classification, torsionless certificates and refutations, and bounded tail
closures."""

from .fields import QQ, FieldError, PrimeField, RationalField, field_by_name
from .quiver import (Path, Quiver, QuiverError, connected_components,
                     enumerate_paths, parse_path, reaches_cycle)
from .coalgebra import (CoalgebraError, ClosureBoundError, Coideal,
                        CoidealError, Element, Functional, InternalCheckError,
                        Subcoalgebra, act, coideal_generated, comultiply,
                        convolve, counit, injective_envelope,
                        multipath_basis, multipath_hull, path_hull,
                        subcoalgebra_closure, validate_monomial)
from .qcf import (EmbeddingCertificate, FailureWitness, MorphismMatrix,
                  QcfVerdict, classify_monomial_qcf,
                  construct_embedding_monomial, f_qcf_exhaustive,
                  fuente_witness, is_module_morphism,
                  is_semiperfect_path_coalgebra, morphism_space,
                  torsionless_oracle)
from .tailclosure import (BoundedTailClosure, PoolError, TailExtension,
                          embed_coideal_in_qF, enumerate_independent_sets,
                          free_embedding_from_annihilator, multipath_pool,
                          single_tail_closure, tail_closure_step, tail_extend,
                          verify_annihilator_identity)
from .fileformat import FileFormatError, WorkbenchFile, parse, serialize

__all__ = [name for name in dir() if not name.startswith("_")]
