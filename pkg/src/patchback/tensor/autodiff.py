"""Dense-tensor numerics with reverse-mode automatic differentiation.

Small numpy-backed tape: each Tensor produced by an op keeps references to
its parents and a closure that routes the incoming gradient to them.
Everything runs in float64 so gradient checks hold at tight tolerances.
The op set is fixed to what the policy, value and denoiser networks need.
"""

from __future__ import annotations

import numpy as np

LOG_2PI = float(np.log(2.0 * np.pi))


class ShapeError(ValueError):
    """Raised when operand shapes are incompatible."""


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum `grad` down to `shape` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """A float64 array plus the bookkeeping needed for backprop.

    Leaf tensors created with ``requires_grad=True`` are trainable
    parameters; op results carry closures that push gradients to their
    parents. Data is treated as immutable once the tensor participates
    in a graph (the optimizer swaps in fresh arrays instead of writing
    in place).
    """

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self._parents: tuple = ()
        self._backward = None
        self.name = name

    # ------------------------------------------------------------------
    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}{tag}, requires_grad={self.requires_grad})"

    # ------------------------------------------------------------------
    @staticmethod
    def _result(data, parents, backward) -> "Tensor":
        out = Tensor(data)
        if any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = parents
            out._backward = backward
        return out

    def _accumulate(self, grad: np.ndarray):
        if self.grad is None:
            self.grad = grad.copy() if grad.base is not None or grad is self.data else grad
        else:
            self.grad = self.grad + grad

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = other if isinstance(other, Tensor) else Tensor(other)
        data = self.data + other.data

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g, self.shape))
            if other.requires_grad:
                other._accumulate(_unbroadcast(g, other.shape))

        return Tensor._result(data, (self, other), backward)

    __radd__ = __add__

    def __neg__(self):
        def backward(g):
            if self.requires_grad:
                self._accumulate(-g)

        return Tensor._result(-self.data, (self,), backward)

    def __sub__(self, other):
        other = other if isinstance(other, Tensor) else Tensor(other)
        return self + (-other)

    def __rsub__(self, other):
        return Tensor(other) + (-self)

    def __mul__(self, other):
        other = other if isinstance(other, Tensor) else Tensor(other)
        data = self.data * other.data

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g * other.data, self.shape))
            if other.requires_grad:
                other._accumulate(_unbroadcast(g * self.data, other.shape))

        return Tensor._result(data, (self, other), backward)

    __rmul__ = __mul__

    def matmul(self, other: "Tensor") -> "Tensor":
        if self.data.ndim != 2 or other.data.ndim != 2:
            raise ShapeError(f"matmul expects 2-d operands, got {self.shape} @ {other.shape}")
        if self.shape[1] != other.shape[0]:
            raise ShapeError(f"matmul inner dims differ: {self.shape} @ {other.shape}")
        data = self.data @ other.data

        def backward(g):
            if self.requires_grad:
                self._accumulate(g @ other.data.T)
            if other.requires_grad:
                other._accumulate(self.data.T @ g)

        return Tensor._result(data, (self, other), backward)

    __matmul__ = matmul

    # -- unary ---------------------------------------------------------
    def relu(self) -> "Tensor":
        mask = self.data > 0.0
        data = np.where(mask, self.data, 0.0)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * mask)

        return Tensor._result(data, (self,), backward)

    def tanh(self) -> "Tensor":
        data = np.tanh(self.data)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * (1.0 - data * data))

        return Tensor._result(data, (self,), backward)

    def exp(self) -> "Tensor":
        data = np.exp(self.data)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * data)

        return Tensor._result(data, (self,), backward)

    def log(self) -> "Tensor":
        data = np.log(self.data)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g / self.data)

        return Tensor._result(data, (self,), backward)

    def softplus(self) -> "Tensor":
        # log(1 + e^x), computed stably for large |x|
        data = np.logaddexp(0.0, self.data)

        def backward(g):
            if self.requires_grad:
                sig = 1.0 / (1.0 + np.exp(-self.data))
                self._accumulate(g * sig)

        return Tensor._result(data, (self,), backward)

    def clip(self, lo: float, hi: float) -> "Tensor":
        data = np.clip(self.data, lo, hi)
        mask = (self.data >= lo) & (self.data <= hi)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * mask)

        return Tensor._result(data, (self,), backward)

    def square(self) -> "Tensor":
        def backward(g):
            if self.requires_grad:
                self._accumulate(g * 2.0 * self.data)

        return Tensor._result(self.data * self.data, (self,), backward)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        old = self.shape
        data = self.data.reshape(shape)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g.reshape(old))

        return Tensor._result(data, (self,), backward)

    def broadcast_to(self, shape) -> "Tensor":
        shape = tuple(shape)
        data = np.broadcast_to(self.data, shape)

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g, self.shape))

        return Tensor._result(data.copy(), (self,), backward)

    # -- reductions ------------------------------------------------------
    def sum(self, axis=None) -> "Tensor":
        data = self.data.sum(axis=axis)

        def backward(g):
            if not self.requires_grad:
                return
            if axis is None:
                self._accumulate(np.broadcast_to(g, self.shape).copy())
            else:
                self._accumulate(np.broadcast_to(np.expand_dims(g, axis), self.shape).copy())

        return Tensor._result(data, (self,), backward)

    def mean(self, axis=None) -> "Tensor":
        n = self.size if axis is None else self.shape[axis]
        data = self.data.mean(axis=axis)

        def backward(g):
            if not self.requires_grad:
                return
            if axis is None:
                self._accumulate(np.broadcast_to(g / n, self.shape).copy())
            else:
                self._accumulate(np.broadcast_to(np.expand_dims(g, axis) / n, self.shape).copy())

        return Tensor._result(data, (self,), backward)

    # -- backward ------------------------------------------------------
    def backward(self):
        """Backpropagate from this scalar through the recorded graph."""
        if self.data.shape != ():
            raise ShapeError(f"backward requires a scalar loss, got shape {self.data.shape}")
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen and p.requires_grad:
                    stack.append((p, False))
        self.grad = np.ones((), dtype=np.float64)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)


# ----------------------------------------------------------------------
# Functional forms
# ----------------------------------------------------------------------

def minimum(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise min; on ties the gradient routes to the first operand."""
    take_a = a.data <= b.data
    data = np.where(take_a, a.data, b.data)

    def backward(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * take_a, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * ~take_a, b.shape))

    return Tensor._result(data, (a, b), backward)


def concat(tensors: list[Tensor], axis: int = -1) -> Tensor:
    datas = [t.data for t in tensors]
    data = np.concatenate(datas, axis=axis)
    sizes = [d.shape[axis] for d in datas]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                idx = [slice(None)] * g.ndim
                idx[axis] = slice(lo, hi)
                t._accumulate(g[tuple(idx)])

    return Tensor._result(data, tuple(tensors), backward)


def mse(pred: Tensor, target: Tensor) -> Tensor:
    """Mean squared error over all elements."""
    if pred.shape != target.shape:
        raise ShapeError(f"mse shapes differ: {pred.shape} vs {target.shape}")
    diff = pred.data - target.data
    n = diff.size
    data = np.float64((diff * diff).mean())

    def backward(g):
        scale = g * 2.0 / n
        if pred.requires_grad:
            pred._accumulate(scale * diff)
        if target.requires_grad:
            target._accumulate(-scale * diff)

    return Tensor._result(data, (pred, target), backward)


def dense(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    """x @ weight + bias for [N, in] x [in, out] (or [in] vectors)."""
    vec = x.data.ndim == 1
    x2 = x.reshape(1, -1) if vec else x
    out = x2.matmul(weight)
    if bias is not None:
        out = out + bias
    return out.reshape(-1) if vec else out


def gaussian_log_prob(value: Tensor, mean: Tensor, log_std: Tensor) -> Tensor:
    """Diagonal-Gaussian log density summed over the last axis.

    For [d] inputs returns a scalar; for [N, d] returns [N] (log_std may
    broadcast along the batch axis).
    """
    if value.shape != mean.shape:
        raise ShapeError(f"value/mean shapes differ: {value.shape} vs {mean.shape}")
    z = (value - mean) * (-log_std).exp()
    per_dim = z.square() * 0.5 + log_std + 0.5 * LOG_2PI
    return -per_dim.sum(axis=-1) if value.data.ndim > 1 else -per_dim.sum()


def gradients(loss: Tensor, params: list[Tensor]) -> dict[str, np.ndarray]:
    """Run backward from `loss` and return a name -> gradient map.

    Parameters unreachable from the loss get zero gradients. Any grads
    left over from a previous call are cleared first.
    """
    for p in params:
        p.grad = None
    loss.backward()
    out = {}
    for p in params:
        if p.name is None:
            raise ValueError("gradients() requires named parameters")
        out[p.name] = p.grad if p.grad is not None else np.zeros_like(p.data)
    return out


def parameter(data, name: str) -> Tensor:
    return Tensor(data, requires_grad=True, name=name)


def uniform_fan_in(rng: np.random.Generator, shape: tuple, fan_in: int) -> np.ndarray:
    """Uniform(+-sqrt(1/fan_in)) init used for all dense/conv weights."""
    bound = float(np.sqrt(1.0 / fan_in))
    return rng.uniform(-bound, bound, size=shape)
