"""
EDF/EDF+ reader and writer
Bit-exact codec for the European Data Format used by the sleep-EDF database:
a 256-byte ASCII global header, 256 bytes of field-major ASCII header per
signal, then data records of 16-bit little-endian samples.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from vigil.errors import ChannelError, EdfFormatError

logger = logging.getLogger(__name__)

ANNOTATION_LABEL = 'EDF Annotations'
GLOBAL_HEADER_BYTES = 256
SIGNAL_HEADER_BYTES = 256
DIGITAL_LIMITS = (-32768, 32767)

# (field, width) in file order
GLOBAL_FIELDS = (
    ('version', 8),
    ('patient_id', 80),
    ('recording_id', 80),
    ('start_date', 8),
    ('start_time', 8),
    ('header_bytes', 8),
    ('reserved', 44),
    ('num_records', 8),
    ('record_duration_s', 8),
    ('num_signals', 4),
)

# Signal headers are stored field-major: all labels, then all transducers...
SIGNAL_FIELDS = (
    ('label', 16),
    ('transducer', 80),
    ('physical_dim', 8),
    ('physical_min', 8),
    ('physical_max', 8),
    ('digital_min', 8),
    ('digital_max', 8),
    ('prefiltering', 80),
    ('samples_per_record', 8),
    ('reserved', 32),
)


@dataclass(frozen=True)
class EdfHeader:
    """Global header of an EDF file"""

    version: str
    patient_id: str
    recording_id: str
    start_date: str
    start_time: str
    header_bytes: int
    num_records: int
    record_duration_s: float
    num_signals: int
    reserved: str = ''

    def __post_init__(self):
        if self.num_signals < 1:
            raise EdfFormatError(f"num_signals must be >= 1, got {self.num_signals}")
        expected = GLOBAL_HEADER_BYTES + SIGNAL_HEADER_BYTES * self.num_signals
        if self.header_bytes != expected:
            raise EdfFormatError(
                f"header_bytes is {self.header_bytes}, expected {expected} "
                f"for {self.num_signals} signals"
            )
        if not self.record_duration_s > 0:
            raise EdfFormatError(f"record duration must be > 0, got {self.record_duration_s}")


@dataclass(frozen=True)
class SignalHeader:
    """Per-signal header: label and calibration"""

    label: str
    physical_min: float
    physical_max: float
    digital_min: int
    digital_max: int
    samples_per_record: int
    transducer: str = ''
    physical_dim: str = 'uV'
    prefiltering: str = ''
    reserved: str = ''

    def __post_init__(self):
        low, high = DIGITAL_LIMITS
        if not (low <= self.digital_min and self.digital_max <= high):
            raise EdfFormatError(
                f"{self.label!r}: digital range [{self.digital_min}, {self.digital_max}] "
                f"exceeds the 16-bit range [{low}, {high}]"
            )
        if self.digital_min >= self.digital_max:
            raise EdfFormatError(
                f"{self.label!r}: digital_min {self.digital_min} >= digital_max {self.digital_max}"
            )
        if self.physical_min == self.physical_max:
            raise EdfFormatError(f"{self.label!r}: physical_min equals physical_max")
        if self.samples_per_record < 1:
            raise EdfFormatError(f"{self.label!r}: samples_per_record must be >= 1")

    @property
    def is_annotation(self):
        return self.label.strip() == ANNOTATION_LABEL

    @property
    def gain(self):
        """Physical units per digital step"""
        return (self.physical_max - self.physical_min) / (self.digital_max - self.digital_min)


class Channel(NamedTuple):
    """One selected signal in physical units"""

    samples: np.ndarray
    sample_rate: float


def digital_to_physical(d, cal):
    """
    Convert digital sample values to physical units

    Args:
        d: Integer sample or array of samples
        cal: SignalHeader holding the calibration

    Returns:
        physical_min + (d - digital_min) * gain, as float or float array
    """
    physical = cal.physical_min + (np.asarray(d, dtype=np.float64) - cal.digital_min) * cal.gain
    if np.ndim(physical) == 0:
        return float(physical)
    return physical


def physical_to_digital(p, cal):
    """
    Quantize physical values back to digital samples

    Args:
        p: Physical value or array
        cal: SignalHeader holding the calibration

    Returns:
        int16 array of digital samples

    Raises:
        EdfFormatError: a value falls outside the calibrated range
    """
    physical = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(physical)):
        raise EdfFormatError(f"{cal.label!r}: non-finite physical value")
    digital = np.rint((physical - cal.physical_min) / cal.gain + cal.digital_min)
    if digital.size and (digital.min() < cal.digital_min or digital.max() > cal.digital_max):
        raise EdfFormatError(
            f"{cal.label!r}: physical value outside calibrated range "
            f"[{cal.physical_min}, {cal.physical_max}]"
        )
    return digital.astype(np.int16)


@dataclass(frozen=True)
class EdfRecording:
    """Parsed EDF file: headers plus per-signal samples

    samples holds physical values (uV) in double precision; digital holds
    the raw 16-bit values they were decoded from. Arrays are read-only.
    """

    header: EdfHeader
    signals: tuple
    samples: tuple
    digital: tuple

    def __post_init__(self):
        object.__setattr__(self, 'signals', tuple(self.signals))
        object.__setattr__(self, 'samples', tuple(np.asarray(s, dtype=np.float64) for s in self.samples))
        object.__setattr__(self, 'digital', tuple(np.asarray(d, dtype=np.int16) for d in self.digital))
        if len(self.signals) != self.header.num_signals:
            raise EdfFormatError(
                f"header declares {self.header.num_signals} signals, got {len(self.signals)}"
            )
        if not (len(self.samples) == len(self.digital) == len(self.signals)):
            raise EdfFormatError("samples and digital must have one entry per signal")
        for sig, physical, digital in zip(self.signals, self.samples, self.digital):
            expected = self.header.num_records * sig.samples_per_record
            if len(physical) != expected or len(digital) != expected:
                raise EdfFormatError(
                    f"{sig.label!r}: {len(physical)} samples, expected {expected}"
                )
            physical.flags.writeable = False
            digital.flags.writeable = False

    @classmethod
    def from_digital(cls, signals, digital, record_duration_s, patient_id='X',
                     recording_id='X', start_date='01.01.00', start_time='00.00.00',
                     reserved=''):
        """
        Build a recording from raw digital samples

        Args:
            signals: Sequence of SignalHeader
            digital: One integer sequence per signal
            record_duration_s: Duration of one data record
            patient_id, recording_id, start_date, start_time, reserved: Header text

        Returns:
            EdfRecording
        """
        signals = tuple(signals)
        if not signals:
            raise EdfFormatError("recording needs at least one signal")
        if len(digital) != len(signals):
            raise EdfFormatError("digital must have one entry per signal")

        arrays = []
        num_records = None
        for sig, values in zip(signals, digital):
            values = np.asarray(values)
            if values.size and (values.min() < sig.digital_min or values.max() > sig.digital_max):
                raise EdfFormatError(f"{sig.label!r}: digital value outside [{sig.digital_min}, {sig.digital_max}]")
            if len(values) % sig.samples_per_record:
                raise EdfFormatError(
                    f"{sig.label!r}: {len(values)} samples is not a whole number of records"
                )
            records = len(values) // sig.samples_per_record
            if num_records is None:
                num_records = records
            elif records != num_records:
                raise EdfFormatError("signals span different numbers of data records")
            arrays.append(values.astype(np.int16))

        header = EdfHeader(
            version='0',
            patient_id=patient_id,
            recording_id=recording_id,
            start_date=start_date,
            start_time=start_time,
            header_bytes=GLOBAL_HEADER_BYTES + SIGNAL_HEADER_BYTES * len(signals),
            num_records=num_records,
            record_duration_s=float(record_duration_s),
            num_signals=len(signals),
            reserved=reserved,
        )
        physical = tuple(digital_to_physical(d, sig) for sig, d in zip(signals, arrays))
        return cls(header, signals, physical, tuple(arrays))

    @classmethod
    def from_physical(cls, signals, physical, record_duration_s, **header_fields):
        """
        Build a recording from physical samples, quantizing through each calibration

        Args:
            signals: Sequence of SignalHeader
            physical: One float sequence per signal
            record_duration_s: Duration of one data record
            **header_fields: Passed to from_digital

        Returns:
            EdfRecording whose samples are the quantized physical values
        """
        digital = [physical_to_digital(p, sig) for sig, p in zip(signals, physical)]
        return cls.from_digital(signals, digital, record_duration_s, **header_fields)

    @property
    def duration_s(self):
        return self.header.num_records * self.header.record_duration_s

    def sample_rate(self, index):
        """Sample rate in Hz of the signal at index"""
        return self.signals[index].samples_per_record / self.header.record_duration_s


def _field_text(raw):
    return raw.decode('latin-1').rstrip(' \x00')


def _parse_int(text, name):
    try:
        return int(text.strip())
    except ValueError:
        # some writers emit "256.0" style integers
        try:
            value = float(text.strip())
        except ValueError:
            raise EdfFormatError(f"non-numeric value {text!r} in field {name}") from None
        if not value.is_integer():
            raise EdfFormatError(f"non-integer value {text!r} in field {name}")
        return int(value)


def _parse_float(text, name):
    try:
        return float(text.strip())
    except ValueError:
        raise EdfFormatError(f"non-numeric value {text!r} in field {name}") from None


def _encode_text(value, width, name):
    try:
        raw = str(value).encode('ascii')
    except UnicodeEncodeError:
        raise EdfFormatError(f"field {name} must be ASCII: {value!r}") from None
    if len(raw) > width:
        raise EdfFormatError(f"field {name} longer than {width} bytes: {value!r}")
    return raw.ljust(width, b' ')


def _encode_number(value, width, name):
    """Shortest text of at most width characters for a numeric field"""
    if float(value).is_integer() and len(str(int(value))) <= width:
        return _encode_text(str(int(value)), width, name)
    for precision in range(15, 0, -1):
        text = f'{float(value):.{precision}g}'
        if len(text) <= width:
            return _encode_text(text, width, name)
    raise EdfFormatError(f"value {value!r} does not fit field {name} ({width} bytes)")


def parse_edf(data):
    """
    Parse the bytes of an EDF/EDF+ file

    Args:
        data: Raw file content

    Returns:
        EdfRecording with every sample converted to physical units

    Raises:
        EdfFormatError: truncated file, bad numeric field or invalid calibration
    """
    data = bytes(data)
    if len(data) < GLOBAL_HEADER_BYTES:
        raise EdfFormatError(f"file is {len(data)} bytes, shorter than the 256-byte header")

    fields = {}
    offset = 0
    for name, width in GLOBAL_FIELDS:
        fields[name] = _field_text(data[offset:offset + width])
        offset += width

    num_signals = _parse_int(fields['num_signals'], 'num_signals')
    if num_signals < 1:
        raise EdfFormatError(f"num_signals must be >= 1, got {num_signals}")
    header_bytes = _parse_int(fields['header_bytes'], 'header_bytes')
    if header_bytes != GLOBAL_HEADER_BYTES + SIGNAL_HEADER_BYTES * num_signals:
        raise EdfFormatError(
            f"header_bytes is {header_bytes}, expected "
            f"{GLOBAL_HEADER_BYTES + SIGNAL_HEADER_BYTES * num_signals}"
        )
    if len(data) < header_bytes:
        raise EdfFormatError("file truncated inside the signal headers")
    if fields['reserved'].startswith('EDF+D'):
        raise EdfFormatError("discontinuous EDF+D recordings are not supported")

    # blank or -1 means unknown; resolved from the file size below
    num_records_text = fields['num_records'].strip()
    num_records = _parse_int(num_records_text, 'num_records') if num_records_text else -1
    record_duration_s = _parse_float(fields['record_duration_s'], 'record_duration_s')

    columns = {}
    for name, width in SIGNAL_FIELDS:
        columns[name] = [_field_text(data[offset + i * width:offset + (i + 1) * width])
                         for i in range(num_signals)]
        offset += num_signals * width

    signals = tuple(
        SignalHeader(
            label=columns['label'][i],
            transducer=columns['transducer'][i],
            physical_dim=columns['physical_dim'][i],
            physical_min=_parse_float(columns['physical_min'][i], 'physical_min'),
            physical_max=_parse_float(columns['physical_max'][i], 'physical_max'),
            digital_min=_parse_int(columns['digital_min'][i], 'digital_min'),
            digital_max=_parse_int(columns['digital_max'][i], 'digital_max'),
            prefiltering=columns['prefiltering'][i],
            samples_per_record=_parse_int(columns['samples_per_record'][i], 'samples_per_record'),
            reserved=columns['reserved'][i],
        )
        for i in range(num_signals)
    )

    samples_per_record = [sig.samples_per_record for sig in signals]
    record_values = sum(samples_per_record)
    record_size = 2 * record_values
    payload = len(data) - header_bytes
    if num_records < 0:
        if payload < 0 or payload % record_size:
            raise EdfFormatError(
                f"data section of {payload} bytes is not a whole number of {record_size}-byte records"
            )
        num_records = payload // record_size
    elif payload != num_records * record_size:
        raise EdfFormatError(
            f"truncated file: {len(data)} bytes, expected "
            f"{header_bytes + num_records * record_size}"
        )

    header = EdfHeader(
        version=fields['version'],
        patient_id=fields['patient_id'],
        recording_id=fields['recording_id'],
        start_date=fields['start_date'],
        start_time=fields['start_time'],
        header_bytes=header_bytes,
        num_records=num_records,
        record_duration_s=record_duration_s,
        num_signals=num_signals,
        reserved=fields['reserved'],
    )

    records = np.frombuffer(data, dtype='<i2', count=num_records * record_values,
                            offset=header_bytes).reshape(num_records, record_values)
    digital = []
    start = 0
    for count in samples_per_record:
        digital.append(records[:, start:start + count].astype(np.int16).reshape(-1))
        start += count
    physical = tuple(digital_to_physical(d, sig) for sig, d in zip(signals, digital))

    logger.debug("Parsed EDF: %d signals, %d records of %gs", num_signals, num_records, record_duration_s)
    return EdfRecording(header, signals, physical, tuple(digital))


def write_edf(recording):
    """
    Serialize a recording to EDF bytes

    Physical samples are quantized through each signal's calibration, so
    parse_edf(write_edf(r)) reproduces r's digital samples exactly.

    Args:
        recording: EdfRecording

    Returns:
        Raw file bytes

    Raises:
        EdfFormatError: no signals, or a physical value outside its calibrated range
    """
    signals = recording.signals
    if not signals:
        raise EdfFormatError("recording needs at least one signal")
    header = recording.header

    values = {
        'version': header.version,
        'patient_id': header.patient_id,
        'recording_id': header.recording_id,
        'start_date': header.start_date,
        'start_time': header.start_time,
        'header_bytes': GLOBAL_HEADER_BYTES + SIGNAL_HEADER_BYTES * len(signals),
        'reserved': header.reserved,
        'num_records': header.num_records,
        'record_duration_s': header.record_duration_s,
        'num_signals': len(signals),
    }
    numeric = {'header_bytes', 'num_records', 'record_duration_s', 'num_signals',
               'physical_min', 'physical_max', 'digital_min', 'digital_max',
               'samples_per_record'}

    parts = []
    for name, width in GLOBAL_FIELDS:
        encode = _encode_number if name in numeric else _encode_text
        parts.append(encode(values[name], width, name))
    for name, width in SIGNAL_FIELDS:
        encode = _encode_number if name in numeric else _encode_text
        for sig in signals:
            parts.append(encode(getattr(sig, name), width, name))

    blocks = []
    for sig, physical in zip(signals, recording.samples):
        digital = physical_to_digital(physical, sig)
        blocks.append(digital.reshape(header.num_records, sig.samples_per_record))
    records = np.concatenate(blocks, axis=1).astype('<i2')
    parts.append(records.tobytes())

    return b''.join(parts)


def read_edf(path):
    """Read and parse an EDF file from disk"""
    recording = parse_edf(Path(path).read_bytes())
    logger.info("Loaded %s: %d signals, %.0f s", path, recording.header.num_signals, recording.duration_s)
    return recording


def save_edf(recording, path):
    """Write a recording to disk as EDF"""
    Path(path).write_bytes(write_edf(recording))


def signal_labels(recording):
    """
    Labels available for channel selection

    Args:
        recording: EdfRecording

    Returns:
        Trimmed labels of every non-annotation signal
    """
    return [sig.label.strip() for sig in recording.signals if not sig.is_annotation]


def channel_index(recording, label):
    """
    Index of the signal whose trimmed label matches

    Raises:
        ChannelError: label unknown or present more than once
    """
    wanted = label.strip()
    matches = [i for i, sig in enumerate(recording.signals)
               if not sig.is_annotation and sig.label.strip() == wanted]
    if not matches:
        available = ', '.join(signal_labels(recording)) or 'none'
        raise ChannelError(f"unknown channel {wanted!r}; available: {available}")
    if len(matches) > 1:
        raise ChannelError(f"ambiguous channel {wanted!r}: {len(matches)} signals share this label")
    return matches[0]


def select_channel(recording, label):
    """
    Select one signal by label

    Args:
        recording: EdfRecording
        label: Channel label, padding ignored

    Returns:
        Channel(samples, sample_rate) in physical units and Hz
    """
    index = channel_index(recording, label)
    return Channel(recording.samples[index], recording.sample_rate(index))
