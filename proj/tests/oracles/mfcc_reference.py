#!/usr/bin/env python3
"""Independent MFCC reference used to freeze the golden values in test_mfcc.cpp.

Re-implements the documented front-end with NumPy/SciPy primitives (rfft and
scipy's orthonormal DCT-II) instead of the library's hand-rolled FFT/DCT,
writes the golden sine clip consumed by the C++ tests, and prints its MFCC
matrix as C++ initializer lists.

Run from the repository root:  python3 tests/oracles/mfcc_reference.py
"""

import math
import pathlib
import struct
import wave

import numpy as np
from scipy.fftpack import dct

SAMPLE_RATE = 16000
FRAME = 512
STRIDE = 320
NUM_FILTERS = 40
NUM_COEFFICIENTS = 26
PRE_EMPHASIS = 0.97
LOG_FLOOR = 1e-20


def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + hz / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (mel / 2595.0) - 1.0)


def mel_bank():
    mel_max = hz_to_mel(SAMPLE_RATE / 2.0)
    hz_points = mel_to_hz(mel_max * np.arange(NUM_FILTERS + 2) / (NUM_FILTERS + 1))
    freqs = np.arange(FRAME // 2 + 1) * SAMPLE_RATE / FRAME
    bank = np.zeros((NUM_FILTERS, FRAME // 2 + 1))
    for m in range(NUM_FILTERS):
        left, center, right = hz_points[m], hz_points[m + 1], hz_points[m + 2]
        rising = (freqs > left) & (freqs <= center)
        falling = (freqs > center) & (freqs < right)
        bank[m, rising] = (freqs[rising] - left) / (center - left)
        bank[m, falling] = (right - freqs[falling]) / (right - center)
    return bank


def reference_mfcc(samples):
    samples = np.asarray(samples, dtype=np.float64)
    emphasized = np.concatenate(
        [samples[:1], samples[1:] - PRE_EMPHASIS * samples[:-1]]
    )
    n = np.arange(FRAME)
    hann = 0.5 * (1.0 - np.cos(2.0 * np.pi * n / FRAME))
    bank = mel_bank()

    num_frames = 1 + (len(samples) - FRAME) // STRIDE
    out = np.zeros((num_frames, NUM_COEFFICIENTS))
    for i in range(num_frames):
        frame = emphasized[i * STRIDE : i * STRIDE + FRAME] * hann
        spectrum = np.fft.rfft(frame)
        power = spectrum.real**2 + spectrum.imag**2
        log_mel = np.log(bank @ power + LOG_FLOOR)
        out[i] = dct(log_mel, type=2, norm="ortho")[:NUM_COEFFICIENTS]
    return out


def golden_sine_int16():
    """1600 samples sweeping 400 Hz -> 3000 Hz with a fade-in, so every
    analysis frame sees different content; quantized to int16."""
    t = np.arange(1600) / SAMPLE_RATE
    phase = 2.0 * np.pi * (400.0 * t + 13000.0 * t * t)
    v = (0.2 + 0.6 * t / t[-1]) * np.sin(phase)
    return np.floor(v * 32767.0 + 0.5).astype(np.int16)


def main():
    data_dir = pathlib.Path(__file__).resolve().parent.parent / "data"
    data_dir.mkdir(exist_ok=True)
    wav_path = data_dir / "golden_sine.wav"

    ints = golden_sine_int16()
    with wave.open(str(wav_path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(SAMPLE_RATE)
        w.writeframes(struct.pack("<%dh" % len(ints), *ints))
    print(f"wrote {wav_path} ({len(ints)} samples)")

    mfcc = reference_mfcc(ints / 32768.0)
    print(f"reference MFCC shape: {mfcc.shape}")
    print("// golden values for tests/test_mfcc.cpp")
    print(f"constexpr double kGoldenSineMfcc[{mfcc.shape[0]}][26] = {{")
    for row in mfcc:
        cells = ", ".join("%.17g" % v for v in row)
        print("    {%s}," % cells)
    print("};")

    # cross-check the closed form used for the all-zero-signal test
    zero = reference_mfcc(np.zeros(FRAME))
    closed_form = math.sqrt(NUM_FILTERS) * math.log(LOG_FLOOR)
    print(f"all-zero C0: reference {zero[0, 0]:.17g}  closed form {closed_form:.17g}")
    print(f"all-zero max |c_1..25|: {np.abs(zero[0, 1:]).max():.3g}")


if __name__ == "__main__":
    main()
