"""Tests for classical and simulated-qubit bit generation, mixing and the bits file."""

import json
from collections import Counter
from unittest.mock import patch

import numpy as np
import pytest
from cryptography.fernet import Fernet, InvalidToken

from src import keyring_store
from src.bitgen import (
    CLASSICAL_PRNG,
    BitRecord,
    BitSource,
    FidelityModel,
    MixedSample,
    generate_classical_bits,
    generate_mixed_sample,
    mix_samples,
    read_bits_csv,
    seal_values,
    simulate_qubit_bits,
    simulate_qubit_shots,
    unseal_values,
    write_bits_csv,
)
from src.bitgen.io import sealed_path
from src.errors import ConfigError, DomainError, EmptySampleError, IncompleteRunError


class TestClassicalBits:
    def test_values_and_provenance(self):
        bits = generate_classical_bits(25, seed=1)
        assert len(bits) == 25
        assert all(b.source is BitSource.CLASSICAL for b in bits)
        assert {b.value for b in bits} <= {0, 1}
        assert [b.id for b in bits] == list(range(25))

    def test_deterministic(self):
        assert generate_classical_bits(50, 3) == generate_classical_bits(50, 3)
        assert generate_classical_bits(50, 3) != generate_classical_bits(50, 4)

    def test_roughly_fair(self):
        values = [b.value for b in generate_classical_bits(10000, seed=5)]
        # 5 sigma of a fair coin over 10^4 draws is 250
        assert abs(sum(values) - 5000) < 250

    def test_empty_raises(self):
        with pytest.raises(EmptySampleError):
            generate_classical_bits(0, 1)


class TestFidelityModel:
    def test_defaults(self):
        model = FidelityModel()
        assert (model.f_hadamard, model.f_readout, model.f_reset) == (0.99, 0.983, 0.99)

    @pytest.mark.parametrize("field", ["f_hadamard", "f_readout", "f_reset"])
    def test_range_checked(self, field):
        with pytest.raises(DomainError):
            FidelityModel(**{field: 0.0})
        with pytest.raises(DomainError):
            FidelityModel(**{field: 1.01})

    def test_perfect_gates_give_fair_bits(self):
        model = FidelityModel(1.0, 1.0, 1.0)
        assert model.p_one_true(1) == 0.5
        assert model.p_one_observed(-1) == 0.5

    def test_hadamard_bias(self):
        model = FidelityModel(f_hadamard=0.99, f_readout=1.0)
        assert model.p_one_true(1) == pytest.approx(0.6)
        assert model.p_one_true(-1) == pytest.approx(0.4)


class TestQubitBits:
    def test_perfect_fidelities_give_fair_bits(self):
        bits = simulate_qubit_bits(20000, FidelityModel(1.0, 1.0, 1.0), seed=2)
        ones = sum(b.value for b in bits)
        assert abs(ones - 10000) < 5 * np.sqrt(20000 * 0.25)

    def test_readout_flip_rate_matches_fidelity(self):
        shots = simulate_qubit_shots(20000, FidelityModel(f_readout=0.861), seed=3)
        # binomial sd of the flip fraction is about 0.0025
        assert shots.flip_fraction == pytest.approx(0.139, abs=0.0125)

    def test_observed_bias_follows_model(self):
        model = FidelityModel(f_hadamard=0.99, f_readout=0.983)
        shots = simulate_qubit_shots(20000, model, seed=4)
        expected = model.p_one_observed(shots.amplitude_sign)
        assert np.mean(shots.observed_values) == pytest.approx(expected, abs=0.0175)

    def test_reset_failures_reported(self):
        shots = simulate_qubit_shots(10000, FidelityModel(f_reset=0.9), seed=6)
        assert np.mean(shots.reset_failures) == pytest.approx(0.1, abs=0.015)

    def test_source_must_be_quantum(self):
        with pytest.raises(DomainError):
            simulate_qubit_bits(3, FidelityModel(), 1, BitSource.CLASSICAL)

    def test_empty_raises(self):
        with pytest.raises(EmptySampleError):
            simulate_qubit_bits(0, FidelityModel(), 1)


class TestMixing:
    def _samples(self):
        return [
            generate_classical_bits(25, 1),
            simulate_qubit_bits(21, FidelityModel(), 2, BitSource.QUBIT_A),
            simulate_qubit_bits(20, FidelityModel(), 3, BitSource.QUBIT_B),
        ]

    def test_preserves_multiset(self):
        samples = self._samples()
        mixed = mix_samples(samples, seed=9)
        expected = Counter((b.source.value, b.value) for s in samples for b in s)
        assert len(mixed) == 66
        assert mixed.value_multiset() == expected
        assert [b.id for b in mixed] == list(range(66))

    @pytest.mark.parametrize("seed", range(20))
    def test_random_inputs_keep_multiset(self, seed):
        rng = np.random.default_rng(seed)
        samples = []
        for source in BitSource:
            values = rng.integers(0, 2, size=int(rng.integers(0, 30)))
            samples.append([BitRecord(i, source, int(v), i) for i, v in enumerate(values)])
        if not any(samples):
            samples[0] = [BitRecord(0, BitSource.CLASSICAL, 1, 0)]
        mixed = mix_samples(samples, seed=int(rng.integers(2**32)))
        expected = Counter((b.source.value, b.value) for s in samples for b in s)
        assert mixed.value_multiset() == expected
        assert len(mixed) == sum(len(s) for s in samples)

    def test_keeps_source_order(self):
        samples = self._samples()
        mixed = mix_samples(samples, seed=9)
        for source, original in zip(BitSource, samples):
            assert [b.origin for b in mixed.by_source(source)] == [b.origin for b in original]

    def test_seed_changes_order_only(self):
        samples = self._samples()
        a, b = mix_samples(samples, 1), mix_samples(samples, 2)
        assert [x.source for x in a] != [x.source for x in b]
        assert a.value_multiset() == b.value_multiset()

    def test_single_source(self):
        bits = generate_classical_bits(5, 1)
        mixed = mix_samples([bits, []], seed=3)
        assert [b.value for b in mixed] == [b.value for b in bits]

    def test_all_empty_raises(self):
        with pytest.raises(EmptySampleError):
            mix_samples([[], []], seed=1)


class TestMixedSample:
    def test_counts_and_prng(self, mixed_sample):
        assert mixed_sample.counts == {"classical": 25, "qubit_a": 21, "qubit_b": 20}
        assert mixed_sample.prng["classical"] == CLASSICAL_PRNG
        assert set(mixed_sample.amplitude_signs) == {"qubit_a", "qubit_b"}

    def test_sources_are_independent(self):
        a = generate_mixed_sample(25, 21, 20, seed=7)
        b = generate_mixed_sample(25, 0, 20, seed=7)
        assert [x.value for x in a.by_source(BitSource.QUBIT_B)] == [
            x.value for x in b.by_source(BitSource.QUBIT_B)
        ]

    def test_zero_counts_raise(self):
        with pytest.raises(EmptySampleError):
            generate_mixed_sample(0, 0, 0, seed=1)


class TestBitsFile:
    def test_unblinded_round_trip(self, tmp_path, mixed_sample):
        written = write_bits_csv(mixed_sample, tmp_path / "bits.csv", blind=False)
        assert written == [tmp_path / "bits.csv"]
        loaded = read_bits_csv(tmp_path / "bits.csv")
        assert loaded.bits == mixed_sample.bits
        assert loaded.provenance_seed == 7
        assert loaded.prng == mixed_sample.prng
        assert loaded.amplitude_signs == mixed_sample.amplitude_signs

    def test_blinded_file_withholds_quantum_values(self, tmp_path, mixed_sample):
        path = tmp_path / "bits.csv"
        written = write_bits_csv(mixed_sample, path, blind=True)
        assert written == [path, sealed_path(path)]
        rows = [line.split(",") for line in path.read_text().splitlines() if not line.startswith("#")]
        for _id, source, value, _origin in rows[1:]:
            if source == "classical":
                assert value in ("0", "1")
            else:
                assert value == ""
        assert read_bits_csv(path).bits == mixed_sample.bits

    def test_missing_sealed_companion(self, tmp_path, mixed_sample):
        path = tmp_path / "bits.csv"
        write_bits_csv(mixed_sample, path, blind=True)
        sealed_path(path).unlink()
        with pytest.raises(IncompleteRunError):
            read_bits_csv(path)

    def test_explicit_sealed_values(self, tmp_path):
        bits = [BitRecord(0, BitSource.QUBIT_A, 1), BitRecord(1, BitSource.CLASSICAL, 0, 0)]
        path = tmp_path / "bits.csv"
        write_bits_csv(MixedSample(bits=bits, provenance_seed=0), path, blind=True)
        assert read_bits_csv(path, sealed_values={0: 0}).bits[0].value == 0

    def test_seal_is_opaque(self):
        token = seal_values({3: 1, 8: 0})
        assert "{" not in token and ":" not in token
        assert unseal_values(token) == {3: 1, 8: 0}

    def test_seal_key_lives_in_keyring(self, memory_keyring):
        token = seal_values({3: 1, 8: 0})
        key_id, body = token.split(" ")
        stored = memory_keyring.get_password(keyring_store.SERVICE, keyring_store.seal_key_name(key_id))
        assert json.loads(Fernet(stored.encode("ascii")).decrypt(body.encode("ascii"))) == {"3": 1, "8": 0}
        with pytest.raises(InvalidToken):
            Fernet(Fernet.generate_key()).decrypt(body.encode("ascii"))

    def test_seal_unreadable_without_key(self, tmp_path, mixed_sample):
        path = tmp_path / "bits.csv"
        write_bits_csv(mixed_sample, path, blind=True)
        key_id = sealed_path(path).read_text(encoding="ascii").split(" ")[0]
        keyring_store.delete_secret(keyring_store.seal_key_name(key_id))
        with pytest.raises(IncompleteRunError):
            read_bits_csv(path)

    def test_seal_without_keyring_backend_stays_in_process(self):
        with patch.object(keyring_store, "KEYRING_AVAILABLE", False):
            token = seal_values({5: 1})
            assert unseal_values(token) == {5: 1}

    def test_corrupt_seal_raises(self):
        with pytest.raises(ConfigError):
            unseal_values("not-a-token")
        key_id = seal_values({1: 0}).split(" ")[0]
        with pytest.raises(ConfigError):
            unseal_values(f"{key_id} garbage")

    def test_malformed_row_raises(self, tmp_path):
        path = tmp_path / "bits.csv"
        path.write_text("id,source,value,origin\n0,martian,1,0\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            read_bits_csv(path)
