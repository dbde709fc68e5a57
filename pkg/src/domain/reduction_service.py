"""
Reduction service orchestrating the command workflows.

This service coordinates:
- Config loading and validation
- Model construction and the reduction pipeline
- Serialization of matrices, tables and reports
- Run manifests with per-stage wall times
"""

import logging
import math
import time
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

from src.domain.acceptance_suite import run_acceptance_suite
from src.domain.davies import davies_generator, sharp_lindblad_form
from src.domain.dynamics import mixing_ratio_scan, theorem_gap_scan
from src.domain.errors import (
    ConfigError,
    ModelInvariantError,
    NotErgodicError,
    NumericalBreakdownError,
)
from src.domain.example_model import example_config, model_from_config
from src.domain.lindblad import analyze_spectrum
from src.domain.matrix_codec import encode_matrix, encode_operator_list
from src.domain.models import (
    CommandResult,
    ModelConfig,
    RunManifest,
    TheoremTag,
    Tolerances,
    ZenoObjects,
)
from src.domain.steady_expansion import (
    estimate_convergence_radius,
    exact_steady_state,
    solve_hierarchy,
    truncation_positivity,
)
from src.domain.tensor_algebra import trace_norm
from src.domain.validators import ModelValidator
from src.domain.zeno_reduction import build_composite, build_zeno_objects

logger = logging.getLogger(__name__)

ERROR_TABLE_COLUMNS = ("gamma", "K", "trace_norm_error", "residual")
SCAN_COLUMNS = ("series", "gamma", "time", "value")
MIXING_COLUMNS = (
    "gamma",
    "full_ratio",
    "projected_ratio",
    "reference",
    "full_ratio_to_sharp",
    "projected_ratio_to_sharp",
)
ACCEPTANCE_COLUMNS = ("name", "passed", "value", "tolerance", "detail")


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


class ConfigSourceProtocol(Protocol):
    """Protocol for config stores."""

    def load_document(self) -> dict: ...
    def load(self) -> ModelConfig: ...
    def digest(self) -> str: ...


class FileSystemProtocol(Protocol):
    """Protocol for file system adapters."""

    def can_write(self, folder: Path) -> bool: ...
    def write_json(self, path: Path, data) -> Path: ...
    def write_csv(self, path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path: ...


class ManifestStoreProtocol(Protocol):
    """Protocol for manifest storage."""

    def save(self, manifest: RunManifest) -> Path: ...


class ReductionService:
    """
    Service behind every command.

    Each public method runs one command, writes its artifacts into the
    output folder and always leaves a manifest, also when the command fails.
    """

    def __init__(
        self,
        file_system: FileSystemProtocol,
        manifest_store: ManifestStoreProtocol,
        output_folder: Path,
        config_store: Optional[ConfigSourceProtocol] = None,
        validator: Optional[ModelValidator] = None,
        seed: Optional[int] = None,
        tolerance_overrides: Optional[dict] = None,
        versions: Optional[dict] = None,
    ):
        """
        Initialize the reduction service.

        Args:
            file_system: File system adapter
            manifest_store: Manifest storage for the output folder
            output_folder: Folder receiving all artifacts
            config_store: Source of the model document (not needed by the
                example commands)
            validator: Document validator
            seed: Seed overriding the document's seed
            tolerance_overrides: Tolerance values overriding the document's
            versions: Library versions recorded in manifests
        """
        self._file_system = file_system
        self._manifest_store = manifest_store
        self._output_folder = Path(output_folder)
        self._config_store = config_store
        self._validator = validator or ModelValidator()
        self._seed = seed
        self._tolerance_overrides = tolerance_overrides or {}
        self._versions = versions or {}
        self._manifest: Optional[RunManifest] = None

    @contextmanager
    def _command(self, name: str):
        self._manifest = RunManifest(
            command=name,
            seed=self._seed if self._seed is not None else 0,
            versions=dict(self._versions),
        )
        result = CommandResult(command=name)
        if not self._file_system.can_write(self._output_folder):
            raise ConfigError(
                f"Output folder {self._output_folder} is not writable",
                user_message=f"Cannot write to {self._output_folder}.",
            )
        try:
            yield result
        except ConfigError:
            self._manifest.exit_code = 2
            raise
        except Exception:
            self._manifest.exit_code = 1
            raise
        else:
            self._manifest.exit_code = result.exit_code
        finally:
            for path in result.outputs:
                self._manifest.add_output(path)
            self._manifest_store.save(self._manifest)

    @contextmanager
    def _stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self._manifest.record_stage(name, time.perf_counter() - start)

    def _write_json(self, result: CommandResult, name: str, data) -> None:
        with self._stage("write"):
            path = self._file_system.write_json(self._output_folder / name, data)
        result.outputs.append(str(path))

    def _write_csv(self, result: CommandResult, name: str, header, rows) -> None:
        with self._stage("write"):
            path = self._file_system.write_csv(self._output_folder / name, header, rows)
        result.outputs.append(str(path))

    def _tolerances(self, base: Tolerances) -> Tolerances:
        return base.with_overrides(**self._tolerance_overrides)

    def _load_config(self) -> ModelConfig:
        """
        Raises:
            ConfigError: If no config was given, it cannot be parsed, or it
                fails validation
        """
        if self._config_store is None:
            raise ConfigError(
                "No config store configured",
                user_message="This command needs --config PATH.",
            )
        with self._stage("load"):
            document = self._config_store.load_document()
            validation = self._validator.validate(document)
            if not validation.is_valid:
                raise ConfigError(
                    f"{validation.error_code}: {validation.error_message}",
                    user_message=f"Invalid config ({validation.error_code}): "
                    f"{validation.error_message}",
                )
            config = self._config_store.load()
            self._manifest.config_digest = self._config_store.digest()

        seed = self._seed if self._seed is not None else config.seed
        self._manifest.seed = seed
        return replace(config, seed=seed, tolerances=self._tolerances(config.tolerances))

    def _reduce(self, config: ModelConfig) -> ZenoObjects:
        with self._stage("build"):
            model = model_from_config(config)
        with self._stage("reduce"):
            return build_zeno_objects(model, config.tolerances)

    def validate(self) -> CommandResult:
        """Report model invariants and the ergodicity of D_A and D_P♯."""
        with self._command("validate") as result:
            config = self._load_config()
            tolerances = config.tolerances
            try:
                with self._stage("build"):
                    model = model_from_config(config)
                result.add("model_invariants", "pass")
                for note in model.adjustments:
                    result.add("adjustment", note)
                with self._stage("reduce"):
                    zeno = build_zeno_objects(model, tolerances)
                result.add("D_A", "ergodic")
                result.add("gap_D_A", f"{zeno.projectors.gap_a:.10g}")
                result.add("jump_extraction", "available" if zeno.extraction else "unavailable")
                with self._stage("davies"):
                    _, d_p_sharp = davies_generator(zeno, tolerances.cluster)
                    summary = analyze_spectrum(d_p_sharp, tolerances.cluster)
            except (ModelInvariantError, NotErgodicError, NumericalBreakdownError) as e:
                logger.debug("Validation failed: %s", e)
                result.add("status", "fail")
                result.add("reason", e.user_message)
                result.exit_code = 1
                return result

            sharp_ok = summary.is_ergodic and summary.is_gapped(tolerances.gap_threshold)
            result.add("D_P_sharp", "ergodic" if sharp_ok else "not ergodic")
            result.add("gap_D_P_sharp", f"{summary.gap:.10g}")
            result.add("status", "pass" if sharp_ok else "fail")
            result.exit_code = 0 if sharp_ok else 1
        return result

    def project(self) -> CommandResult:
        """Write H_P, D_P, its jump form, D_P♯ and B_P."""
        with self._command("project") as result:
            config = self._load_config()
            zeno = self._reduce(config)
            with self._stage("davies"):
                bohr, d_p_sharp = davies_generator(zeno, config.tolerances.cluster)

            document = {
                "H_P": encode_matrix(zeno.h_p.entries),
                "D_P": encode_matrix(zeno.d_p.matrix),
                "D_P_sharp": encode_matrix(d_p_sharp.matrix),
                "B_P": encode_matrix(zeno.b_p.matrix),
                "bohr": {
                    "eigenvalues": [float(v) for v in bohr.eigenvalues],
                    "frequencies": [float(v) for v in bohr.frequencies],
                    "b": bohr.b,
                },
                "extraction_available": zeno.extraction is not None,
            }
            if zeno.extraction is not None:
                dp_spec = zeno.dp_lindblad
                sharp_spec = sharp_lindblad_form(dp_spec, bohr)
                document.update(
                    {
                        "D_P_jumps": encode_operator_list(j.entries for j in dp_spec.jumps),
                        "D_P_hamiltonian": encode_matrix(dp_spec.hamiltonian_part.entries),
                        "D_P_sharp_jumps": encode_operator_list(
                            j.entries for j in sharp_spec.jumps
                        ),
                        "D_P_sharp_hamiltonian": encode_matrix(
                            sharp_spec.hamiltonian_part.entries
                        ),
                        "M": encode_matrix(zeno.m),
                        "A": encode_matrix(zeno.a_mat),
                        "B": encode_matrix(zeno.b_mat),
                        "rebuild_error": zeno.extraction.rebuild_error,
                    }
                )
                result.add("jumps_D_P", len(dp_spec.jumps))
                result.add("jumps_D_P_sharp", len(sharp_spec.jumps))
            else:
                result.add("notice", "D_A not diagonalizable; D_P written as superoperator only")

            self._write_json(result, "project.json", document)
            result.add("bohr_frequencies", len(bohr.frequencies))
            result.add("output", self._output_folder / "project.json")
        return result

    def steady(self, order: int = 1) -> CommandResult:
        """Hierarchy up to n̄_order and its error table over the config's rates."""
        with self._command("steady") as result:
            config = self._load_config()
            zeno = self._reduce(config)
            with self._stage("davies"):
                _, d_p_sharp = davies_generator(zeno, config.tolerances.cluster)
            with self._stage("hierarchy"):
                expansion = solve_hierarchy(
                    zeno, d_p_sharp, order, tolerances=config.tolerances, seed=config.seed
                )

            rows = []
            truncated, exact, positivity = {}, {}, {}
            with self._stage("exact"):
                for gamma in config.rates:
                    l_gamma = build_composite(zeno.model.with_gamma(gamma)).l_gamma
                    state = exact_steady_state(l_gamma)
                    key = f"{gamma:g}"
                    exact[key] = encode_matrix(state.entries)
                    truncated[key] = encode_matrix(expansion.truncated_state(gamma).entries)
                    positivity[key] = truncation_positivity(expansion, gamma)
                    for k in range(order + 1):
                        candidate = expansion.truncated_state(gamma, k)
                        rows.append(
                            (
                                float(gamma),
                                k,
                                trace_norm(candidate - state),
                                trace_norm(l_gamma(candidate)),
                            )
                        )

            document = {
                "R_bar": encode_matrix(expansion.r_bar.entries),
                "pi_A": encode_matrix(expansion.pi_a.entries),
                "n_bar": encode_operator_list(n.entries for n in expansion.n_bar),
                "V": encode_operator_list(v.entries for v in expansion.v_coefficients),
                "W": encode_operator_list(w.entries for w in expansion.w_coefficients),
                "per_order_residuals": list(expansion.per_order_residuals),
                "convergence_ratio": _finite_or_none(estimate_convergence_radius(expansion)),
                "truncated_states": truncated,
                "exact_states": exact,
                "truncation_min_eigenvalue": positivity,
            }
            self._write_json(result, "steady.json", document)
            self._write_csv(result, "error_table.csv", ERROR_TABLE_COLUMNS, rows)

            result.add("orders", order + 1)
            result.add("max_residual", f"{max(expansion.per_order_residuals):.3e}")
            for gamma, k, error, _ in rows:
                result.add(f"error[gamma={gamma:g},K={k}]", f"{error:.6e}")
        return result

    def scan(self, tag: TheoremTag) -> CommandResult:
        """Trajectory gap scan for one comparison over the config's γ grid."""
        with self._command("scan") as result:
            config = self._load_config()
            zeno = self._reduce(config)
            with self._stage("scan"):
                report = theorem_gap_scan(zeno, tag, config.rates, seed=config.seed)

            rows = [list(row) for row in report.rows()]
            rows.append(["fitted_rate", "", "", report.fitted_rate])
            rows.append(["r_squared", "", "", report.r_squared])
            self._write_csv(result, f"scan_{tag.value}.csv", SCAN_COLUMNS, rows)

            result.add("theorem", tag.value)
            result.add("abscissa", report.fit_abscissa)
            result.add("fitted_rate", f"{report.fitted_rate:.4f}")
            result.add("r_squared", f"{report.r_squared:.4f}")
        return result

    def scan_mixing(self, epsilon: float) -> CommandResult:
        """Mixing-time ratios t_mix/γ against t_mix(D_P♯) over the config's rates."""
        with self._command("scan") as result:
            config = self._load_config()
            zeno = self._reduce(config)
            with self._stage("davies"):
                _, d_p_sharp = davies_generator(zeno, config.tolerances.cluster)
            with self._stage("scan"):
                scan = mixing_ratio_scan(
                    zeno, epsilon, config.rates, d_p_sharp=d_p_sharp, seed=config.seed
                )

            rows = [
                (
                    row.gamma,
                    row.full_ratio,
                    row.projected_ratio,
                    scan.reference,
                    row.full_ratio / scan.reference,
                    row.projected_ratio / scan.reference,
                )
                for row in scan.rows
            ]
            self._write_csv(result, "scan_mixing.csv", MIXING_COLUMNS, rows)

            result.add("epsilon", epsilon)
            result.add("t_mix_D_P_sharp", f"{scan.reference:.6g}")
            for row in scan.rows:
                result.add(
                    f"ratios[gamma={row.gamma:g}]",
                    f"{row.full_ratio:.6g} {row.projected_ratio:.6g}",
                )
            for label, change in scan.continuity.items():
                result.add(f"continuity_{label}", f"{change:.4f}")
        return result

    def verify_example(self, beta: float) -> CommandResult:
        """Run the acceptance suite for the built-in example at β."""
        with self._command("verify-example") as result:
            seed = self._seed if self._seed is not None else 0
            self._manifest.seed = seed
            with self._stage("verify"):
                report = run_acceptance_suite(beta, seed, self._tolerances(Tolerances()))

            rows = [
                (c.name, "pass" if c.passed else "fail", c.value, c.tolerance, c.detail)
                for c in report.checks
            ]
            self._write_csv(result, "acceptance.csv", ACCEPTANCE_COLUMNS, rows)
            for check in report.checks:
                status = "PASS" if check.passed else "FAIL"
                result.add(check.name, f"{status} {check.value:.3e} (tol {check.tolerance:.1e})")
            result.add("status", "pass" if report.passed else "fail")
            result.exit_code = 0 if report.passed else 1
        return result

    def export_example(self, beta: float) -> CommandResult:
        """Write the built-in example as a config document."""
        with self._command("export-example") as result:
            seed = self._seed if self._seed is not None else 0
            self._manifest.seed = seed
            config = example_config(beta, seed=seed, tolerances=self._tolerances(Tolerances()))
            self._write_json(result, "example_config.json", config.to_dict())
            result.add("beta", beta)
            result.add("output", self._output_folder / "example_config.json")
        return result
