"""Modbus RTU framing, CRC-16 and a simulated NPK probe slave.

Frames are address + function + payload + CRC-16/MODBUS (poly 0xA001
reflected, init 0xFFFF), CRC transmitted low byte first. Only function 0x03
(read holding registers) is served; the probe maps N, P, K to three
consecutive holding registers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ChecksumError, ProtocolError, TruncationError

READ_HOLDING_REGISTERS = 0x03
EXCEPTION_ILLEGAL_FUNCTION = 0x01
EXCEPTION_ILLEGAL_ADDRESS = 0x02
MAX_FRAME_LEN = 256
MAX_READ_COUNT = 125


def _build_crc_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = (crc >> 1) ^ 0xA001 if crc & 1 else crc >> 1
        table.append(crc)
    return table


_CRC_TABLE = _build_crc_table()


def crc16(data: bytes) -> int:
    """CRC-16/MODBUS over data; empty input returns the 0xFFFF init value."""
    crc = 0xFFFF
    for b in data:
        crc = (crc >> 8) ^ _CRC_TABLE[(crc ^ b) & 0xFF]
    return crc


def append_crc(body: bytes) -> bytes:
    """Return body with its CRC appended low byte first."""
    crc = crc16(body)
    return body + bytes([crc & 0xFF, (crc >> 8) & 0xFF])


def frame_to_hex(frame: bytes) -> str:
    """Render a frame as space-separated uppercase hex for --dump-hex output."""
    return " ".join(f"{b:02X}" for b in frame)


@dataclass(frozen=True)
class RtuFrame:
    """A decoded frame: address, function code, raw payload and its CRC."""

    address: int
    function: int
    payload: bytes
    crc: int

    def encode(self) -> bytes:
        return append_crc(bytes([self.address, self.function]) + self.payload)


@dataclass(frozen=True)
class ReadRequest:
    """Holding-register read: start register and count (1..125)."""

    start_register: int
    count: int

    def __post_init__(self) -> None:
        if not 0 <= self.start_register <= 0xFFFF:
            raise ProtocolError(f"start register out of range: {self.start_register}")
        if not 1 <= self.count <= MAX_READ_COUNT:
            raise ProtocolError(f"register count must be 1..{MAX_READ_COUNT}, got {self.count}")
        if self.start_register + self.count > 0x10000:
            raise ProtocolError("register window extends past address space")


@dataclass(frozen=True)
class NpkRegisterMap:
    """Where the probe exposes its three nutrient registers.

    The three registers must be consecutive (N, P, K order). unit is the
    physical quantity one register count represents.
    """

    slave_address: int = 0x01
    n_register: int = 0x001E
    p_register: int = 0x001F
    k_register: int = 0x0020
    unit: float = 1.0

    def __post_init__(self) -> None:
        if not 1 <= self.slave_address <= 247:
            raise ProtocolError(f"slave address must be 1..247, got {self.slave_address}")
        if (self.p_register, self.k_register) != (self.n_register + 1, self.n_register + 2):
            raise ProtocolError("n/p/k registers must be consecutive")


def encode_read_request(map_: NpkRegisterMap, req: ReadRequest) -> bytes:
    """Build the function-0x03 request frame for the mapped slave."""
    body = bytes(
        [
            map_.slave_address,
            READ_HOLDING_REGISTERS,
            req.start_register >> 8,
            req.start_register & 0xFF,
            req.count >> 8,
            req.count & 0xFF,
        ]
    )
    return append_crc(body)


def decode_frame(raw: bytes) -> RtuFrame:
    """Split a raw frame and verify its CRC.

    Raises TruncationError below 4 bytes and ChecksumError on CRC mismatch.
    """
    if len(raw) < 4:
        raise TruncationError(f"frame too short: {len(raw)} bytes")
    if len(raw) > MAX_FRAME_LEN:
        raise ProtocolError(f"frame too long: {len(raw)} bytes")
    body, crc_bytes = raw[:-2], raw[-2:]
    received = crc_bytes[0] | (crc_bytes[1] << 8)
    computed = crc16(body)
    if received != computed:
        raise ChecksumError(f"CRC mismatch: got 0x{received:04X}, computed 0x{computed:04X}")
    return RtuFrame(address=body[0], function=body[1], payload=body[2:], crc=received)


def parse_read_request(frame: RtuFrame) -> ReadRequest:
    """Interpret a frame's payload as a register read request."""
    if len(frame.payload) != 4:
        raise ProtocolError(f"read request payload must be 4 bytes, got {len(frame.payload)}")
    start = (frame.payload[0] << 8) | frame.payload[1]
    count = (frame.payload[2] << 8) | frame.payload[3]
    return ReadRequest(start_register=start, count=count)


def encode_register_response(address: int, values: list[int]) -> bytes:
    """Build a function-0x03 response: byte count then big-endian registers."""
    payload = bytes([2 * len(values)])
    for v in values:
        payload += bytes([(v >> 8) & 0xFF, v & 0xFF])
    return append_crc(bytes([address, READ_HOLDING_REGISTERS]) + payload)


def decode_register_response(raw: bytes) -> list[int]:
    """Extract register values from a response frame, checking CRC and layout."""
    frame = decode_frame(raw)
    if frame.function & 0x80:
        raise ProtocolError(f"exception response, code 0x{frame.payload[0]:02X}")
    if frame.function != READ_HOLDING_REGISTERS:
        raise ProtocolError(f"unexpected function 0x{frame.function:02X}")
    byte_count = frame.payload[0]
    data = frame.payload[1:]
    if byte_count != len(data) or byte_count % 2 != 0:
        raise ProtocolError(f"byte count {byte_count} does not match payload {len(data)}")
    return [(data[i] << 8) | data[i + 1] for i in range(0, byte_count, 2)]


def exception_response(address: int, function: int, code: int) -> bytes:
    return append_crc(bytes([address, function | 0x80, code]))


@dataclass
class NpkSlave:
    """Simulated RS-485 NPK probe: answers register reads over its map.

    Requests not addressed to it (or corrupted ones) get bus silence (None),
    matching real multi-drop behaviour. State is owned by the slave and
    requests are processed one at a time.
    """

    map: NpkRegisterMap = field(default_factory=NpkRegisterMap)
    registers: tuple[int, int, int] = (0, 0, 0)

    def set_npk(self, n: int, p: int, k: int) -> None:
        for v in (n, p, k):
            if not 0 <= v <= 0xFFFF:
                raise ProtocolError(f"register value out of 16-bit range: {v}")
        self.registers = (n, p, k)

    def respond(self, request: bytes) -> bytes | None:
        """Process one request frame; return the response bytes or None (silence)."""
        try:
            frame = decode_frame(request)
        except ProtocolError:
            return None  # corrupted frames are never answered
        if frame.address != self.map.slave_address:
            return None
        if frame.function != READ_HOLDING_REGISTERS:
            return exception_response(
                self.map.slave_address, frame.function, EXCEPTION_ILLEGAL_FUNCTION
            )
        try:
            req = parse_read_request(frame)
        except ProtocolError:
            return exception_response(
                self.map.slave_address, frame.function, EXCEPTION_ILLEGAL_ADDRESS
            )
        first, last = self.map.n_register, self.map.k_register
        if req.start_register < first or req.start_register + req.count - 1 > last:
            return exception_response(
                self.map.slave_address, frame.function, EXCEPTION_ILLEGAL_ADDRESS
            )
        offset = req.start_register - first
        values = list(self.registers[offset : offset + req.count])
        return encode_register_response(self.map.slave_address, values)


def slave_respond(
    map_: NpkRegisterMap, request: bytes, npk_registers: tuple[int, int, int]
) -> bytes | None:
    """One-shot variant of NpkSlave.respond for a given register snapshot."""
    slave = NpkSlave(map=map_)
    slave.set_npk(*npk_registers)
    return slave.respond(request)
